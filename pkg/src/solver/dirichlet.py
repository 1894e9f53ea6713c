"""
Dirichlet problems and the generalized Hilbert transform.

dirichlet_g solves dbar w = alpha conj(w) with prescribed Re tr w and mean of
Im tr w. The boundary data enter through g = C(x + i(H0 x + c')); the real
unknowns (x, c') are found by an outer GMRES loop whose operator is identity
plus compact, each application running one Fredholm solve.
"""

from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from config.settings import settings
from ..coeff.coefficient import AlphaField, Coefficient, alpha_from_nu, nu_to_sigma
from ..coeff.similarity import similarity_inverse
from ..grid.circle import BoundarySpectrum, CircleGrid
from ..grid.fields import DiskField
from ..grid.norms import (area_lp_norm, boundary_norm, circle_norm, hardy_norm, lp_mean,
                          sobolev_norm)
from ..grid.radial import RadialRule
from ..ops.boundary import cauchy_boundary, conjugation_h0
from ..utils.errors import ConvergenceError
from ..utils.logger import get_logger
from ..utils.validator import InputValidator
from .config import SolveConfig
from .fredholm import contraction_estimate, solve_fredholm
from .report import SolveReport

logger = get_logger(__name__, settings.LOG_LEVEL)


def _require_real(phi: BoundarySpectrum, name: str):
    if not phi.is_real_valued:
        raise ValueError(f"{name} must be a real-valued boundary spectrum")


# ==================== OUTER UNKNOWNS ====================

class _BoundaryCoordinates:
    """Real coordinates [x_0, Re x_1..M, Im x_1..M, c'] of a real spectrum plus a constant."""

    def __init__(self, grid: CircleGrid):
        self.grid = grid
        self.M = grid.M
        self.size = 2 * grid.M + 2

    def pack(self, phi_coeffs: np.ndarray, constant: float) -> np.ndarray:
        positive = phi_coeffs[self.M + 1:]
        return np.concatenate([[phi_coeffs[self.M].real], positive.real, positive.imag, [constant]])

    def unpack(self, y: np.ndarray) -> Tuple[BoundarySpectrum, float]:
        M = self.M
        positive = y[1: M + 1] + 1j * y[M + 1: 2 * M + 1]
        coeffs = np.concatenate([np.conj(positive[::-1]), [y[0]], positive])
        return BoundarySpectrum(coeffs, self.grid, True), float(y[-1])


def harmonic_data(x: BoundarySpectrum, constant: float, rule: RadialRule) -> DiskField:
    """C(x + i(H0 x + c)): holomorphic field with Re tr = x and mean Im tr = c."""
    spectrum = x + conjugation_h0(x) * 1j + BoundarySpectrum.from_modes({0: 1j * constant}, x.grid)
    return cauchy_boundary(spectrum, rule)


def _match(w: DiskField) -> Tuple[np.ndarray, float]:
    """Re tr w coefficients and the mean of Im tr w."""
    trace = w.boundary()
    return trace.real_part().coeffs, float(trace.coeff(0).imag)


def dirichlet_g(psi: BoundarySpectrum, mean_im: float, alpha: AlphaField,
                cfg: Optional[SolveConfig] = None) -> Tuple[DiskField, SolveReport]:
    """
    w in G^p_alpha with Re tr w = psi and (1/2pi) int Im tr w = mean_im.

    Raises:
        ValueError: If psi is not real-valued
        ConvergenceError: If the outer iteration misses outer_tol
    """
    _require_real(psi, "psi")
    cfg = cfg or SolveConfig.from_settings()
    rule = alpha.alpha.rule
    report = SolveReport()
    psi_norm = boundary_norm(psi, cfg.p)
    report.add_norm("psi_lp", psi_norm)

    if alpha.is_zero:
        w = harmonic_data(psi, mean_im, rule)
        report.record_stage("dirichlet", "direct", 0, 0.0)
        return w, report

    coords = _BoundaryCoordinates(psi.grid)
    rhs = coords.pack(psi.coeffs, mean_im)
    if not np.any(rhs):
        report.record_stage("dirichlet", "direct", 0, 0.0)
        return DiskField.zeros(psi.grid, rule), report

    probe = harmonic_data(psi, mean_im, rule)
    estimate = contraction_estimate(alpha, probe, cfg.power_iterations)
    inner_iterations = {"n": 0, "calls": 0}
    last_inner = {}

    def inner(y: np.ndarray) -> DiskField:
        x, c = coords.unpack(y)
        w, inner_report = solve_fredholm(harmonic_data(x, c, rule), alpha, cfg, contraction=estimate)
        inner_iterations["n"] += inner_report.stages["fredholm"].iterations
        inner_iterations["calls"] += 1
        last_inner["report"] = inner_report
        return w

    def matvec(y: np.ndarray) -> np.ndarray:
        re_coeffs, im_mean = _match(inner(np.asarray(y).ravel()))
        return coords.pack(re_coeffs, im_mean)

    counter = {"n": 0}

    def callback(residual_norm):
        counter["n"] += 1
        logger.solve_progress("dirichlet/gmres", counter["n"], float(residual_norm))

    operator = LinearOperator((coords.size, coords.size), matvec=matvec, dtype=float)
    y, info = gmres(operator, rhs, x0=rhs, rtol=0.1 * cfg.outer_tol, atol=0.0,
                    restart=cfg.restart, maxiter=cfg.max_iter,
                    callback=callback, callback_type="pr_norm")

    w = inner(y)
    re_coeffs, im_mean = _match(w)
    scale = max(psi_norm, abs(mean_im), 1e-300)
    miss = BoundarySpectrum(re_coeffs, psi.grid, True) - psi
    residual = max(boundary_norm(miss, cfg.p), abs(im_mean - mean_im)) / scale
    report.record_stage("dirichlet", "gmres", counter["n"], residual, residual <= cfg.outer_tol)
    report.diagnostics["inner_iterations"] = inner_iterations["n"]
    report.diagnostics["inner_solves"] = inner_iterations["calls"]
    if "p_plus" in last_inner["report"].certificates:
        report.certificates["p_plus"] = last_inner["report"].certificates["p_plus"]
    report.diagnostics["contraction_estimate"] = estimate
    logger.stage_report("dirichlet", "gmres", counter["n"], residual)
    if residual > cfg.outer_tol:
        raise ConvergenceError(
            f"Dirichlet outer iteration did not converge: residual {residual:.3e} > {cfg.outer_tol:.1e} "
            f"(gmres info={info})",
            residual=residual, iterations=counter["n"],
        )
    return w, report


def dirichlet_g_normalized(psi: BoundarySpectrum, alpha: AlphaField,
                           cfg: Optional[SolveConfig] = None) -> Tuple[DiskField, SolveReport]:
    """
    Unique w with Re tr w = psi and int sigma^{1/2} Im tr w = 0.

    Solves with zero Im-mean, then subtracts i m sigma^{-1/2}, which solves the
    same equation when alpha comes from a coefficient.

    Raises:
        ValueError: If alpha was not derived from a Coefficient
    """
    if alpha.coefficient is None:
        raise ValueError("normalized Dirichlet problem needs alpha derived from a Coefficient")
    w1, report = dirichlet_g(psi, 0.0, alpha, cfg)
    sigma = nu_to_sigma(alpha.coefficient)
    sqrt_boundary = np.sqrt(alpha.coefficient.sigma_boundary())
    m = float(np.mean(sqrt_boundary * w1.boundary().imag_part().samples()))
    report.diagnostics["normalization_shift"] = m
    if m == 0.0:
        return w1, report
    return w1 - sigma.inv_sqrt_sigma * (1j * m), report


def normalization_residuals(f: DiskField) -> dict:
    """|mean Im tr f| and |mean tr f| (the latter vanishes in the H^{p,00} subclass)."""
    mean = complex(f.boundary().coeff(0))
    return {"im_mean": abs(mean.imag), "mean": abs(mean)}


def beltrami_residual(f: DiskField, coef: Coefficient, inner: Tuple[float, float] = (0.05, 0.95)) -> float:
    """sup |dbar f - nu conj(d f)| / sup |d f| over nodes with inner[0] < r < inner[1]."""
    df = f.dz()
    residual = f.dzbar() - coef.nu.multiply(df.conj())
    nodes = f.rule.nodes
    band = (nodes > inner[0]) & (nodes < inner[1])
    scale = float(np.max(np.abs(df.synthesize()[band]), initial=0.0))
    value = float(np.max(np.abs(residual.synthesize()[band]), initial=0.0))
    return value / scale if scale > 0 else value


def dirichlet_h(phi: BoundarySpectrum, coef: Coefficient,
                cfg: Optional[SolveConfig] = None) -> Tuple[DiskField, SolveReport]:
    """
    f solving dbar f = nu conj(d f) with Re tr f = phi and zero mean of Im tr f.

    Raises:
        ValueError: If phi is not real-valued
    """
    _require_real(phi, "phi")
    cfg = cfg or SolveConfig.from_settings()
    sqrt_sigma = np.sqrt(coef.sigma_boundary())
    psi = BoundarySpectrum.from_samples(phi.samples() * sqrt_sigma, phi.grid, real=True)
    w, report = dirichlet_g_normalized(psi, alpha_from_nu(coef), cfg)
    f = similarity_inverse(w, coef)
    if not coef.exact_derivatives:
        report.warnings.append("alpha from spectrally differentiated nu")

    report.add_norm("phi_lp", boundary_norm(phi, cfg.p))
    report.add_norm("f_hardy", hardy_norm(f, cfg.p))
    report.add_norm("trace_lp", boundary_norm(f.boundary(), cfg.p))
    report.diagnostics["normalization"] = normalization_residuals(f)
    report.diagnostics["beltrami_residual"] = beltrami_residual(f, coef)
    return f, report


# ==================== HILBERT TRANSFORM ====================

def hilbert_nu_report(phi: BoundarySpectrum, coef: Coefficient,
                      cfg: Optional[SolveConfig] = None) -> Tuple[BoundarySpectrum, SolveReport]:
    cfg = cfg or SolveConfig.from_settings()
    f, report = dirichlet_h(phi, coef, cfg)
    h = f.boundary().imag_part()
    phi_norm = boundary_norm(phi, cfg.p)
    if phi_norm > 0:
        report.diagnostics["hilbert_ratio"] = boundary_norm(h, cfg.p) / phi_norm
    return h, report


def hilbert_nu(phi: BoundarySpectrum, coef: Coefficient,
               cfg: Optional[SolveConfig] = None) -> BoundarySpectrum:
    """
    Generalized conjugate function: Im tr f for the normalized solution f with
    Re tr f = phi. Reduces to conjugation_h0 at nu = 0.
    """
    return hilbert_nu_report(phi, coef, cfg)[0]


def hilbert_nu_complex(phi: BoundarySpectrum, coef: Coefficient,
                       cfg: Optional[SolveConfig] = None) -> BoundarySpectrum:
    """Complex extension H_nu a + i H_{-nu} b for phi = a + i b."""
    a, b = phi.real_part(), phi.imag_part()
    out = hilbert_nu(a, coef, cfg)
    if np.any(b.coeffs):
        out = out + hilbert_nu(b, coef.negated(), cfg) * 1j
    return out


def composition_check(coef: Coefficient, cfg: Optional[SolveConfig] = None, trials: int = 5,
                      rng: Optional[np.random.Generator] = None, degree: int = 8) -> float:
    """
    max over random phi of ||H_{-nu} H_nu phi + phi - mean(phi)||_2 / ||phi||_2.
    """
    cfg = cfg or SolveConfig.from_settings()
    rng = rng or np.random.default_rng(settings.SEED)
    negated = coef.negated()
    worst = 0.0
    for _ in range(trials):
        phi = BoundarySpectrum.random_real(coef.grid, rng, degree)
        back = hilbert_nu(hilbert_nu(phi, coef, cfg), negated, cfg)
        gap = back + phi - BoundarySpectrum.from_modes({0: phi.mean()}, coef.grid, real=True)
        worst = max(worst, boundary_norm(gap, 2.0) / boundary_norm(phi, 2.0))
    logger.debug(f"composition_check: worst relative gap {worst:.3e} over {trials} trials")
    return worst


# ==================== REAL PART ====================

def dirichlet_u(phi: BoundarySpectrum, coef: Coefficient,
                cfg: Optional[SolveConfig] = None) -> Tuple[DiskField, SolveReport]:
    """
    u = Re f solving div(sigma grad u) = 0 with u = phi on the circle.
    The report certifies ||tr u||_p <= ess sup_r ||u||_{L^p(T_r)} and lists
    ||u(r.) - tr u||_p at the outer nodes.
    """
    cfg = cfg or SolveConfig.from_settings()
    f, report = dirichlet_h(phi, coef, cfg)
    u = f.real()
    trace_norm = boundary_norm(u.boundary(), cfg.p)
    hardy = hardy_norm(u, cfg.p)
    report.add_norm("u_hardy", hardy)
    report.add_norm("u_trace_lp", trace_norm)
    passed = trace_norm <= hardy * (1 + 1e-12)
    logger.certificate("fatou_chain", trace_norm, hardy, passed)
    report.add_certificate("fatou_chain", trace_norm, hardy, passed)

    boundary = u.boundary().samples()
    nodes = u.rule.nodes[-cfg.trace_nodes:]
    report.diagnostics["trace_convergence"] = {
        f"{r:.6f}": lp_mean(u.circle_samples(r) - boundary, cfg.p) for r in nodes
    }
    return u, report


# ==================== SOBOLEV CERTIFICATES ====================

def _sobolev_ratios(phi: BoundarySpectrum, coef: Coefficient, cfg: SolveConfig) -> dict:
    f, _ = dirichlet_h(phi, coef, cfg)
    h = f.boundary().imag_part()
    phi_w1p = sobolev_norm(phi, cfg.p, 1)
    disk = (area_lp_norm(f, cfg.p) ** cfg.p + area_lp_norm(f.dz(), cfg.p) ** cfg.p
            + area_lp_norm(f.dzbar(), cfg.p) ** cfg.p) ** (1.0 / cfg.p)
    return {
        "hilbert_w1p": sobolev_norm(h, cfg.p, 1) / phi_w1p,
        "solution_w1p": disk / phi_w1p,
    }


def sobolev_certificates(phi: BoundarySpectrum, coef: Coefficient,
                         cfg: Optional[SolveConfig] = None, refine: bool = True) -> dict:
    """
    Measured operator ratios ||H_nu phi||_{W^{1,p}} / ||phi||_{W^{1,p}} and
    ||f||_{W^{1,p}(D)} / ||phi||_{W^{1,p}}, with their drift under one grid
    refinement (doubled n_theta and radial panels) when nu has a closed form.
    """
    _require_real(phi, "phi")
    cfg = cfg or SolveConfig.from_settings()
    ratios = _sobolev_ratios(phi, coef, cfg)
    result = {"coarse": ratios}
    if refine and coef.has_closed_form:
        grid = CircleGrid(2 * coef.grid.n_theta)
        rule = RadialRule(2 * coef.rule.n_panels, coef.rule.nodes_per_panel)
        fine = _sobolev_ratios(phi.resample(grid), coef.resample(grid, rule), cfg)
        result["fine"] = fine
        result["drift"] = {k: abs(fine[k] - ratios[k]) / max(abs(ratios[k]), 1e-300) for k in ratios}
    return result
