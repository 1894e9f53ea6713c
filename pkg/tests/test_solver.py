"""
Solver Tests
Fredholm, Dirichlet, Hilbert, Neumann and gradient solves on a small grid.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.coeff.coefficient import AlphaField, Coefficient, alpha_from_nu
from src.grid.circle import BoundarySpectrum, CircleGrid
from src.grid.fields import DiskField
from src.grid.norms import boundary_norm, hardy_norm
from src.grid.radial import RadialRule
from src.ops.boundary import conjugation_h0
from src.solver.config import SolveConfig
from src.solver.dirichlet import (composition_check, dirichlet_h, dirichlet_u, hilbert_nu,
                                  hilbert_nu_complex, hilbert_nu_report, sobolev_certificates)
from src.solver.fredholm import apply_t_alpha, solve_fredholm
from src.solver.gradient import boundary_derivative, gradient_field, gradient_trace
from src.solver.neumann import neumann, stencil_normal_derivative
from src.solver.ode_oracle import RadialOracle
from src.solver.report import SolveReport, plain_value
from src.utils.errors import CompatibilityError, ConfigurationError, ConvergenceError

RADIAL_SIGMA = "1 + r**2/2"
SMOOTH_NU = "0.2*x*y + 0.1*x"


@pytest.fixture(scope="module")
def grid():
    return CircleGrid(32)


@pytest.fixture(scope="module")
def rule():
    return RadialRule(4, 8)


@pytest.fixture(scope="module")
def cfg():
    return SolveConfig()


@pytest.fixture(scope="module")
def radial(grid, rule):
    return Coefficient.radial(RADIAL_SIGMA, grid, rule)


@pytest.fixture(scope="module")
def smooth(grid, rule):
    return Coefficient.from_expression(SMOOTH_NU, grid, rule)


def _cos(grid, n=1):
    return BoundarySpectrum.from_modes({n: 0.5, -n: 0.5}, grid, real=True)


# ==================== CONFIG / REPORT ====================

def test_solve_config_validation():
    cfg = SolveConfig(p=3.0)

    assert cfg.q == pytest.approx(1.5)
    with pytest.raises(ValidationError):
        SolveConfig(p=1.0)
    with pytest.raises(ValidationError):
        SolveConfig(unknown=1)


def test_report_to_dict_is_plain():
    report = SolveReport()
    report.record_stage("fredholm", "picard", 3, 1e-12)
    report.add_certificate("bound", 0.5, 1.0)
    report.diagnostics["value"] = np.float64(2.0)
    data = report.to_dict()

    assert data["stages"]["fredholm"]["iterations"] == 3
    assert data["certificates"]["bound"]["passed"] is True
    assert isinstance(data["diagnostics"]["value"], float)
    assert report.residual == pytest.approx(1e-12)
    assert plain_value(1 + 2j) == {"re": 1.0, "im": 2.0}


# ==================== FREDHOLM ====================

def test_fredholm_alpha_zero_is_exact(grid, rule, cfg):
    g = DiskField.from_callable(lambda z: 1 + z ** 2, grid, rule)
    w, report = solve_fredholm(g, AlphaField.zero(grid, rule), cfg)

    np.testing.assert_array_equal(w.profiles, g.profiles)
    assert report.stages["fredholm"].method == "direct"


def test_fredholm_rejects_non_holomorphic_data(grid, rule, cfg):
    g = DiskField.from_callable(np.conj, grid, rule)

    with pytest.raises(ValueError):
        solve_fredholm(g, AlphaField.from_callable(lambda z: 0.1 + 0 * z, grid, rule), cfg)


def test_fredholm_manufactured_solution(grid, rule, cfg):
    alpha = AlphaField.from_callable(lambda z: 0.2 + 0.1 * z - 0.1j * np.conj(z), grid, rule)
    exact = DiskField.from_callable(lambda z: 1 + 0.5j * z - 0.3 * np.conj(z) + z * np.conj(z), grid, rule)
    g = exact - apply_t_alpha(exact, alpha)
    w, report = solve_fredholm(g, alpha, cfg, require_holomorphic=False)

    gap = np.max(np.abs((w - exact).synthesize())) / np.max(np.abs(exact.synthesize()))
    assert gap < 1e-8
    assert report.stages["fredholm"].converged


def test_fredholm_iteration_limit_raises(grid, rule, smooth):
    strict = SolveConfig(inner_tol=1e-14, outer_tol=1e-13, max_iter=1, restart=1)
    g = DiskField.from_callable(lambda z: 1 + z, grid, rule)

    with pytest.raises(ConvergenceError):
        solve_fredholm(g, alpha_from_nu(smooth), strict)


# ==================== DIRICHLET / HILBERT ====================

def test_hilbert_reduces_to_classical_conjugation(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    phi = BoundarySpectrum.random_real(grid, np.random.default_rng(1), degree=grid.M, decay=0.0)

    np.testing.assert_allclose(hilbert_nu(phi, coef, cfg).coeffs, conjugation_h0(phi).coeffs, atol=1e-10)


@pytest.mark.parametrize("sigma", [0.5, 2.0])
def test_hilbert_constant_sigma_scales_conjugate(grid, rule, cfg, sigma):
    coef = Coefficient.constant_sigma(sigma, grid, rule)
    phi = BoundarySpectrum.random_real(grid, np.random.default_rng(2), degree=10)
    gap = hilbert_nu(phi, coef, cfg) - conjugation_h0(phi) * sigma

    assert boundary_norm(gap, 2.0) / boundary_norm(phi, 2.0) < 1e-8


def test_dirichlet_h_smooth_coefficient(grid, cfg, smooth):
    phi = _cos(grid) + _cos(grid, 2) * 0.5
    f, report = dirichlet_h(phi, smooth, cfg)

    assert boundary_norm(f.boundary().real_part() - phi, 2.0) < 1e-5
    assert report.diagnostics["normalization"]["im_mean"] < 1e-6
    assert report.diagnostics["beltrami_residual"] < 1e-4
    assert report.certificates["p_plus"]["passed"]
    assert report.stages["dirichlet"].converged


def test_dirichlet_rejects_complex_data(grid, cfg, smooth):
    with pytest.raises(ValueError):
        dirichlet_h(BoundarySpectrum.from_samples(grid.points, grid), smooth, cfg)


def test_zero_data_gives_zero_solution(grid, cfg, radial):
    f, _ = dirichlet_h(BoundarySpectrum.zeros(grid), radial, cfg)

    assert hardy_norm(f, cfg.p) < 1e-12


def test_dirichlet_u_matches_radial_oracle(grid, cfg, radial):
    oracle = RadialOracle(RADIAL_SIGMA)
    phi = _cos(grid, 2)
    u, report = dirichlet_u(phi, radial, cfg)

    errors = oracle.compare(u, phi, (0.3, 0.6, 0.9))
    assert max(errors.values()) < 1e-5
    assert report.certificates["fatou_chain"]["passed"]
    assert len(report.diagnostics["trace_convergence"]) == cfg.trace_nodes


def test_hilbert_report_ratio(grid, cfg, radial):
    h, report = hilbert_nu_report(_cos(grid), radial, cfg)

    assert h.is_real_valued
    assert report.diagnostics["hilbert_ratio"] > 0


def test_hilbert_complex_extension_at_nu_zero(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    a, b = _cos(grid), _cos(grid, 3)
    phi = BoundarySpectrum(a.coeffs + 1j * b.coeffs, grid)
    expected = conjugation_h0(a).coeffs + 1j * conjugation_h0(b).coeffs

    np.testing.assert_allclose(hilbert_nu_complex(phi, coef, cfg).coeffs, expected, atol=1e-12)


def test_composition_identity(cfg, radial):
    assert composition_check(radial, cfg, trials=2, rng=np.random.default_rng(3), degree=6) < 1e-6


def test_sobolev_certificates_without_refinement(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    result = sobolev_certificates(_cos(grid, 2), coef, cfg, refine=False)

    assert set(result) == {"coarse"}
    assert result["coarse"]["hilbert_w1p"] == pytest.approx(1.0, rel=1e-10)


# ==================== NEUMANN ====================

def test_neumann_compatibility(grid, cfg, radial):
    constant = BoundarySpectrum.from_modes({0: 1.0}, grid, real=True)

    with pytest.raises(CompatibilityError) as info:
        neumann(constant, radial, cfg)
    assert info.value.weighted_mean == pytest.approx(1.5)


def test_neumann_matches_radial_oracle(grid, cfg, radial):
    oracle = RadialOracle(RADIAL_SIGMA)
    g = _cos(grid)
    u, report = neumann(g, radial, cfg)

    errors = oracle.compare(u, g, (0.3, 0.6, 0.9), kind="neumann")
    assert max(errors.values()) < 1e-5
    assert abs(u.boundary().mean()) < 1e-12
    assert report.diagnostics["normal_derivative_error"] < 1e-4


def test_neumann_normal_derivative_from_trace_and_stencil_agree(grid, cfg, radial):
    g = BoundarySpectrum.from_modes({1: 0.5, -1: 0.5, 3: 0.25j, -3: -0.25j}, grid, real=True)
    u, report = neumann(g, radial, cfg)

    assert report.diagnostics["normal_derivative_error"] < 1e-7
    assert report.diagnostics["normal_derivative_stencil_gap"] < 1e-3
    stencil = stencil_normal_derivative(u, cfg.trace_nodes)
    np.testing.assert_allclose(stencil.samples(), g.samples(), atol=1e-3)


def test_radial_oracle_rejects_non_radial_sigma():
    with pytest.raises(ConfigurationError):
        RadialOracle("1 + x")


# ==================== GRADIENT ====================

def test_gradient_equation_and_boundary_limit(grid, cfg, smooth):
    f, _ = dirichlet_h(_cos(grid), smooth, cfg)
    W, report = gradient_field(f, smooth, cfg)

    assert report.diagnostics["gradient_equation_residual"] < 1e-4
    formula = boundary_derivative(f.boundary(), smooth, cfg)
    direct = gradient_trace(f, cfg.trace_nodes)
    assert boundary_norm(formula - direct, 2.0) / boundary_norm(direct, 2.0) < 1e-3


def test_boundary_derivative_of_identity(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    f = DiskField.from_callable(lambda z: z ** 2, grid, rule)

    np.testing.assert_allclose(boundary_derivative(f.boundary(), coef, cfg).samples(), 2 * grid.points,
                               atol=1e-12)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
