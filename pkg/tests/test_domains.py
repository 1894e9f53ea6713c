"""
Domain Tests
Conformal maps and transport of Dirichlet problems to psi(D).
"""

import numpy as np
import pytest

from src.coeff.coefficient import Coefficient
from src.domains.conformal import (AffineMap, ExpressionMap, IdentityMap, MobiusAutomorphism, QuadraticMap,
                                   map_from_spec)
from src.domains.transport import (map_independence_check, pde_residual_check, pullback_problem,
                                   pushforward_solution)
from src.grid.circle import CircleGrid
from src.grid.radial import RadialRule
from src.solver.config import SolveConfig
from src.solver.dirichlet import dirichlet_u
from src.utils.errors import ConfigurationError

SMOOTH_NU = "0.2*x*y + 0.1*x"
POINTS = np.array([0.0, 0.3 + 0.1j, -0.4j, -0.5 + 0.2j])


@pytest.fixture(scope="module")
def grid():
    return CircleGrid(32)


@pytest.fixture(scope="module")
def rule():
    return RadialRule(4, 8)


@pytest.fixture(scope="module")
def cfg():
    return SolveConfig()


# ==================== MAPS ====================

def test_quadratic_map_inverse_round_trip():
    cmap = QuadraticMap(0.3).check()

    np.testing.assert_allclose(cmap.inverse(cmap(POINTS)), POINTS, atol=1e-12)
    np.testing.assert_allclose(cmap.dpsi(POINTS), 1 + 0.6 * POINTS)
    assert cmap.min_derivative == pytest.approx(0.4)


def test_quadratic_map_rejects_large_eps():
    with pytest.raises(ConfigurationError):
        QuadraticMap(0.6)


def test_single_point_inverse():
    cmap = QuadraticMap(0.2)
    w = cmap(np.array([0.5 + 0.5j]))

    np.testing.assert_allclose(cmap.inverse(w), [0.5 + 0.5j], atol=1e-12)


def test_affine_map_spec_round_trip():
    cmap = map_from_spec({"kind": "affine", "a": [2.0, 1.0], "b": 0.5})
    rebuilt = map_from_spec(cmap.to_spec())

    np.testing.assert_allclose(rebuilt(POINTS), (2 + 1j) * POINTS + 0.5)
    np.testing.assert_allclose(cmap.inverse(cmap(POINTS)), POINTS, atol=1e-14)
    with pytest.raises(ConfigurationError):
        AffineMap(0.0)


def test_expression_map_derivative():
    cmap = ExpressionMap("z + z**3/5")

    np.testing.assert_allclose(cmap.dpsi(POINTS), 1 + 0.6 * POINTS ** 2, atol=1e-14)
    assert map_from_spec(cmap.to_spec()).name == "expression"


def test_map_check_rejects_critical_point():
    # psi' = 1 + 1.2 z vanishes at z = -5/6
    with pytest.raises(ConfigurationError):
        map_from_spec({"kind": "expression", "expression": "z + 0.6*z**2"})


def test_map_from_spec_rejects_unknown_kind():
    with pytest.raises(ConfigurationError):
        map_from_spec({"kind": "joukowski"})
    with pytest.raises(ConfigurationError):
        map_from_spec({"kind": "expression"})


def test_mobius_automorphism():
    phi = MobiusAutomorphism(0.3 - 0.2j, rotation=0.7)
    circle = np.exp(1j * np.linspace(0, 2 * np.pi, 9))

    np.testing.assert_allclose(np.abs(phi(circle)), 1.0, atol=1e-14)
    np.testing.assert_allclose(phi.inverse(phi(POINTS)), POINTS, atol=1e-14)
    assert abs(phi(np.array([0.3 - 0.2j]))[0]) < 1e-15
    with pytest.raises(ConfigurationError):
        MobiusAutomorphism(1.2)


def test_composed_map_inverse():
    composed = QuadraticMap(0.25).compose(MobiusAutomorphism(0.2))

    np.testing.assert_allclose(composed.inverse(composed(POINTS)), POINTS, atol=1e-12)
    assert composed.name.startswith("quadratic")


# ==================== TRANSPORT ====================

def test_pullback_with_identity_is_the_disk_problem(grid, rule):
    coef, phi = pullback_problem(IdentityMap(), SMOOTH_NU, "x", grid, rule)
    direct = Coefficient.from_expression(SMOOTH_NU, grid, rule)

    np.testing.assert_allclose(coef.nu.synthesize(), direct.nu.synthesize(), atol=1e-13)
    np.testing.assert_allclose(coef.dbar_nu.synthesize(), direct.dbar_nu.synthesize(), atol=1e-13)
    np.testing.assert_allclose(phi.samples(), np.cos(grid.theta), atol=1e-13)


def test_pullback_constant_coefficient(grid, rule):
    coef, phi = pullback_problem(QuadraticMap(0.3), "0.25", lambda w: w.real ** 2, grid, rule)

    assert coef.is_constant
    np.testing.assert_allclose(phi.samples(), QuadraticMap(0.3)(grid.points).real ** 2, atol=1e-12)


def test_pullback_rejects_inadmissible_coefficient(grid, rule):
    # |nu| reaches 1 on psi(D) = 2D
    with pytest.raises(ConfigurationError):
        pullback_problem(AffineMap(2.0), "0.6*x", "x", grid, rule)


def test_pushforward_point_cloud(grid, rule, cfg):
    cmap = AffineMap(2.0, 1j)
    coef, phi = pullback_problem(cmap, 0.0, "x", grid, rule)
    u, _ = dirichlet_u(phi, coef, cfg)
    cloud = pushforward_solution(cmap, u)

    assert list(cloud.columns) == ["x", "y", "re", "im"]
    assert len(cloud) == (rule.n_radial + 1) * grid.n_theta
    # U(w) = Re w on the affine image
    np.testing.assert_allclose(cloud["re"], cloud["x"], atol=1e-8)


def test_pde_residual_on_mapped_domain(grid, rule, cfg):
    cmap = QuadraticMap(0.2)
    coef, phi = pullback_problem(cmap, SMOOTH_NU, "x*y + x", grid, rule)
    u, _ = dirichlet_u(phi, coef, cfg)
    result = pde_residual_check(cmap, SMOOTH_NU, u)

    assert result["relative"] < 1e-3
    assert result["points"] == 5


def test_map_independence(grid, rule, cfg):
    result = map_independence_check(AffineMap(1.5), MobiusAutomorphism(0.2), "0.1*x", "x**2 - y",
                                    grid, rule, cfg)

    assert result["relative"] < 1e-4


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
