"""
Coefficient Tests
Expression grammar, coefficient algebra and the similarity transform.
"""

import numpy as np
import pytest

from src.coeff.coefficient import (AlphaField, Coefficient, alpha1_from_nu, alpha_consistency,
                                   alpha_from_nu, nu_from_sigma, nu_to_sigma, sigma_from_nu)
from src.coeff.expressions import ComplexExpression, RealExpression, boundary_function
from src.coeff.similarity import (similarity_forward, similarity_forward_boundary, similarity_inverse)
from src.grid.circle import CircleGrid
from src.grid.fields import DiskField
from src.grid.radial import RadialRule
from src.utils.errors import ConfigurationError

SMOOTH_NU = "0.2*x*y + 0.1*x"


@pytest.fixture
def grid():
    return CircleGrid(32)


@pytest.fixture
def rule():
    return RadialRule(4, 8)


# ==================== EXPRESSIONS ====================

def test_real_expression_polar_variables():
    f = RealExpression.parse("r**2 + cos(theta)").function()
    z = np.array([0.5j, 0.3, -0.4])

    np.testing.assert_allclose(f(z), np.abs(z) ** 2 + np.cos(np.angle(z)), atol=1e-14)


def test_real_expression_wirtinger_derivatives():
    d, dbar = RealExpression.parse("x*y").wirtinger()
    z = np.array([1 + 2j])

    np.testing.assert_allclose(d(z), 0.5 * (2 - 1j))
    np.testing.assert_allclose(dbar(z), 0.5 * (2 + 1j))


@pytest.mark.parametrize("text", ["", "x + q", "tan(x)", "x +* y"])
def test_real_expression_rejects_bad_input(text):
    with pytest.raises(ConfigurationError):
        RealExpression.parse(text)


@pytest.mark.parametrize("text", [
    "x.__class__",
    "__import__('os')",
    "f('x')",
    "x.func(y)",
    "(x + y).subs(x, 1)",
    "open(x)",
])
def test_real_expression_refuses_code(text):
    with pytest.raises(ConfigurationError):
        RealExpression.parse(text)


def test_expression_grammar_keeps_decimals():
    expr = RealExpression.parse("0.25*x + 1.5e-2*y - .5")

    np.testing.assert_allclose(expr.function()(np.array([1 + 2j])), [0.25 + 0.03 - 0.5])


def test_complex_expression_and_derivative():
    expr = ComplexExpression.parse("z**2 + i*z")
    z = np.array([0.3 + 0.1j, -0.5j])

    np.testing.assert_allclose(expr.function()(z), z ** 2 + 1j * z)
    np.testing.assert_allclose(expr.derivative()(z), 2 * z + 1j)


def test_boundary_function_on_circle():
    theta = np.linspace(0, 2 * np.pi, 7, endpoint=False)

    np.testing.assert_allclose(boundary_function("x*y + x")(theta),
                               np.cos(theta) * np.sin(theta) + np.cos(theta), atol=1e-14)


# ==================== COEFFICIENTS ====================

def test_sigma_nu_conversion():
    assert sigma_from_nu(0.0) == 1.0
    assert nu_from_sigma(2.0) == pytest.approx(-1.0 / 3.0)
    assert sigma_from_nu(nu_from_sigma(0.7)) == pytest.approx(0.7)


def test_constant_coefficients(grid, rule):
    coef = Coefficient.constant_sigma(2.0, grid, rule)

    assert coef.is_constant
    assert coef.kappa == pytest.approx(1.0 / 3.0)
    np.testing.assert_allclose(coef.sigma_boundary(), 2.0)
    assert alpha_from_nu(coef).is_zero
    with pytest.raises(ValueError):
        Coefficient.constant(1.0, grid, rule)
    with pytest.raises(ValueError):
        Coefficient.constant_sigma(-1.0, grid, rule)


def test_expression_coefficient_derivatives(grid, rule):
    coef = Coefficient.from_expression(SMOOTH_NU, grid, rule)
    z = rule.nodes[:, None] * grid.points[None, :]
    x, y = z.real, z.imag

    assert coef.exact_derivatives
    assert not coef.is_constant
    np.testing.assert_allclose(coef.nu.synthesize().real, 0.2 * x * y + 0.1 * x, atol=1e-13)
    np.testing.assert_allclose(coef.dbar_nu.synthesize(), 0.5 * ((0.2 * y + 0.1) + 1j * 0.2 * x), atol=1e-13)
    np.testing.assert_allclose(coef.d_nu.synthesize(), 0.5 * ((0.2 * y + 0.1) - 1j * 0.2 * x), atol=1e-13)


def test_radial_sigma_coefficient(grid, rule):
    coef = Coefficient.radial("1 + r**2/2", grid, rule)
    points = np.array([0.0, 0.5, 0.9j])

    np.testing.assert_allclose(coef.sigma_at(points), 1 + np.abs(points) ** 2 / 2, atol=1e-14)
    c, C = coef.ellipticity()
    assert 1.0 <= c <= C <= 1.5


def test_inadmissible_expression_is_rejected(grid, rule):
    with pytest.raises(ConfigurationError):
        Coefficient.from_expression("2*x", grid, rule)
    with pytest.raises(ConfigurationError):
        Coefficient.from_expression("x", grid, rule, of="mu")


def test_negated_coefficient_inverts_sigma(grid, rule):
    coef = Coefficient.from_expression(SMOOTH_NU, grid, rule)
    neg = coef.negated()
    z = np.array([0.2 + 0.3j, -0.6])

    np.testing.assert_allclose(neg.sigma_at(z), 1.0 / coef.sigma_at(z))


def test_resample_only_for_closed_forms(grid, rule):
    coef = Coefficient.from_expression(SMOOTH_NU, grid, rule)
    fine = coef.resample(CircleGrid(64), rule)

    assert fine.grid.n_theta == 64
    sampled = Coefficient.from_samples(coef.nu)
    assert not sampled.exact_derivatives
    with pytest.raises(ValueError):
        sampled.resample(CircleGrid(64), rule)


def test_alpha_matches_log_sigma_derivative(grid, rule):
    coef = Coefficient.from_expression(SMOOTH_NU, grid, rule)

    assert alpha_consistency(coef) < 1e-4


def test_alpha_and_alpha1_formulas(grid, rule):
    coef = Coefficient.from_expression(SMOOTH_NU, grid, rule)
    nu = coef.nu.synthesize().real

    np.testing.assert_allclose(alpha_from_nu(coef).alpha.synthesize(),
                               -coef.dbar_nu.synthesize() / (1 - nu ** 2), atol=1e-12)
    np.testing.assert_allclose(alpha1_from_nu(coef).synthesize(),
                               coef.d_nu.synthesize() / (1 - nu ** 2), atol=1e-12)


def test_sigma_fields(grid, rule):
    fields = nu_to_sigma(Coefficient.constant_sigma(4.0, grid, rule))

    np.testing.assert_allclose(fields.sigma.synthesize(), 4.0, atol=1e-13)
    np.testing.assert_allclose(fields.sqrt_sigma.synthesize(), 2.0, atol=1e-13)
    np.testing.assert_allclose(fields.inv_sqrt_sigma.synthesize(), 0.5, atol=1e-13)


def test_free_alpha_field(grid, rule):
    alpha = AlphaField.from_callable(lambda z: 0.25 * z, grid, rule)

    assert not alpha.from_coefficient
    assert alpha.sup_norm == pytest.approx(0.25)
    assert AlphaField.zero(grid, rule).is_zero


# ==================== SIMILARITY ====================

def test_similarity_constant_coefficient(grid, rule):
    coef = Coefficient.constant(0.3, grid, rule)
    f = DiskField.from_callable(lambda z: z + 0.5j, grid, rule)
    w = similarity_forward(f, coef)
    expected = lambda z: (z + 0.5j - 0.3 * np.conj(z + 0.5j)) / np.sqrt(1 - 0.09)

    np.testing.assert_allclose(w.boundary().samples(), expected(grid.points), atol=1e-13)
    np.testing.assert_allclose(similarity_inverse(w, coef).synthesize(), f.synthesize(), atol=1e-13)


def test_similarity_split_form_on_boundary(grid, rule):
    coef = Coefficient.constant_sigma(4.0, grid, rule)
    f = DiskField.from_callable(lambda z: z, grid, rule)
    w = similarity_forward_boundary(f.boundary(), coef).samples()

    np.testing.assert_allclose(w.real, 2.0 * np.cos(grid.theta), atol=1e-13)
    np.testing.assert_allclose(w.imag, 0.5 * np.sin(grid.theta), atol=1e-13)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
