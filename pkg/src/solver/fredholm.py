"""
Fredholm solve of w = g + T(alpha conj(w)).

The map w -> T(alpha conj(w)) is conjugate-linear, so the Krylov branch
works on the real system in (Re w, Im w). Unknowns are scaled by the square
root of the area weights, which makes the Euclidean norm of the Krylov
vectors equal to the L^2(D) norm the residual is measured in.
"""

from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from config.settings import settings
from ..coeff.coefficient import AlphaField
from ..grid.fields import DiskField
from ..grid.norms import area_norm
from ..ops.area import cauchy_area
from ..ops.boundary import analytic_projection
from ..utils.errors import ConvergenceError
from ..utils.logger import get_logger
from .config import SolveConfig
from .report import SolveReport

logger = get_logger(__name__, settings.LOG_LEVEL)


def apply_t_alpha(w: DiskField, alpha: AlphaField) -> DiskField:
    """T(alpha conj(w)), with the product dealiased."""
    return cauchy_area(alpha.alpha.multiply(w.conj()))


def fredholm_residual(w: DiskField, g: DiskField, alpha: AlphaField) -> float:
    """Absolute L^2(D) norm of w - g - T(alpha conj(w))."""
    return area_norm(w - g - apply_t_alpha(w, alpha))


def contraction_estimate(alpha: AlphaField, start: DiskField, iterations: int) -> float:
    """Power-iteration estimate of the growth factor of w -> T(alpha conj(w))."""
    v = start
    norm = area_norm(v)
    if norm == 0:
        v = DiskField.from_callable(lambda z: np.ones_like(z), start.grid, start.rule)
        norm = area_norm(v)
    estimate = 0.0
    for _ in range(iterations):
        kv = apply_t_alpha(v * (1.0 / norm), alpha)
        ratio = area_norm(kv)
        estimate = max(estimate, ratio)
        if ratio == 0:
            break
        v, norm = kv, ratio
    return estimate


class _RealSystem:
    """(I - T_alpha) as a real LinearOperator on scaled (Re, Im) profile vectors."""

    def __init__(self, alpha: AlphaField, like: DiskField):
        self.alpha = alpha
        self.like = like
        self.shape = like.profiles.shape
        self.scale = np.sqrt(2 * np.pi * like.rule.weights)[None, :]
        self.size = like.profiles.size

    def pack(self, field: DiskField) -> np.ndarray:
        scaled = field.profiles * self.scale
        return np.concatenate([scaled.real.ravel(), scaled.imag.ravel()])

    def unpack(self, x: np.ndarray) -> DiskField:
        profiles = (x[: self.size] + 1j * x[self.size:]).reshape(self.shape) / self.scale
        return self.like.like(profiles)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        w = self.unpack(np.asarray(x).ravel())
        return self.pack(w - apply_t_alpha(w, self.alpha))

    def operator(self) -> LinearOperator:
        n = 2 * self.size
        return LinearOperator((n, n), matvec=self.matvec, dtype=float)


def _picard(g: DiskField, alpha: AlphaField, cfg: SolveConfig, target: float, scale: float) -> Tuple[DiskField, int, bool]:
    w = g
    first = None
    for iteration in range(1, cfg.max_iter + 1):
        nxt = g + apply_t_alpha(w, alpha)
        step = area_norm(nxt - w)
        logger.solve_progress("fredholm/picard", iteration, step / scale)
        if step <= target:
            return nxt, iteration, True
        first = step if first is None else first
        if step > 10 * first:
            # diverging: restart the Krylov branch from g
            return g, iteration, False
        w = nxt
    return w, cfg.max_iter, False


def _krylov(g: DiskField, alpha: AlphaField, cfg: SolveConfig, x0: Optional[DiskField] = None) -> Tuple[DiskField, int, bool]:
    system = _RealSystem(alpha, g)
    counter = {"n": 0}

    def callback(residual_norm):
        counter["n"] += 1
        logger.solve_progress("fredholm/gmres", counter["n"], float(residual_norm))

    x, info = gmres(
        system.operator(),
        system.pack(g),
        x0=None if x0 is None else system.pack(x0),
        rtol=0.1 * cfg.inner_tol,
        atol=0.0,
        restart=cfg.restart,
        maxiter=cfg.max_iter,
        callback=callback,
        callback_type="pr_norm",
    )
    return system.unpack(x), counter["n"], info == 0


def solve_fredholm(g: DiskField, alpha: AlphaField, cfg: Optional[SolveConfig] = None,
                   require_holomorphic: bool = True,
                   contraction: Optional[float] = None) -> Tuple[DiskField, SolveReport]:
    """
    Solve w = g + T(alpha conj(w)).

    Picard iteration is used when the power-iteration contraction estimate is
    below cfg.contraction_limit, GMRES on the real system otherwise (and as a
    fallback when Picard stalls). The returned field is g + T(alpha conj(w))
    for the converged iterate, so it carries an exact trace whenever g does.

    Args:
        g: holomorphic right-hand side
        alpha: coefficient of the conjugate term
        cfg: solver configuration
        require_holomorphic: reject g with negative modes; manufactured
            solutions pass False (I - T_alpha is invertible on all of L^p(D))
        contraction: precomputed contraction estimate (skips the power iteration)

    Returns:
        (w, report)

    Raises:
        ValueError: If g is required to be holomorphic and is not
        ConvergenceError: If the recomputed residual exceeds inner_tol * ||g||
    """
    cfg = cfg or SolveConfig.from_settings()
    report = SolveReport()

    if require_holomorphic:
        leak = float(np.max(g.negative_mode_fraction(), initial=0.0))
        if leak > cfg.holomorphy_threshold:
            raise ValueError(f"g is not holomorphic: negative-mode fraction {leak:.3e}")

    g_norm = area_norm(g)
    report.add_norm("g_area", g_norm)

    if alpha.is_zero or g_norm == 0.0:
        w = g if g_norm > 0 else DiskField.zeros(g.grid, g.rule)
        report.record_stage("fredholm", "direct", 0, 0.0)
        logger.stage_report("fredholm", "direct", 0, 0.0)
        _p_plus_certificate(w, g, cfg, report)
        return w, report

    target = cfg.inner_tol * g_norm
    estimate = contraction if contraction is not None else contraction_estimate(alpha, g, cfg.power_iterations)
    report.diagnostics["contraction_estimate"] = estimate
    logger.debug(f"fredholm: contraction estimate {estimate:.3f} (limit {cfg.contraction_limit})")

    converged = False
    if estimate < cfg.contraction_limit:
        method = "picard"
        w, iterations, converged = _picard(g, alpha, cfg, target * (1.0 - estimate), g_norm)
        if not converged:
            logger.warning("fredholm: Picard iteration stalled, switching to GMRES")
            w, extra, converged = _krylov(g, alpha, cfg, x0=w)
            method, iterations = "picard+gmres", iterations + extra
    else:
        method = "gmres"
        w, iterations, converged = _krylov(g, alpha, cfg)

    w = g + apply_t_alpha(w, alpha)
    residual = fredholm_residual(w, g, alpha) / g_norm
    report.record_stage("fredholm", method, iterations, residual, residual <= cfg.inner_tol)
    logger.stage_report("fredholm", method, iterations, residual)

    if residual > cfg.inner_tol:
        raise ConvergenceError(
            f"Fredholm solve did not converge: residual {residual:.3e} > {cfg.inner_tol:.1e} "
            f"after {iterations} iterations ({method})",
            residual=residual, iterations=iterations,
        )
    _p_plus_certificate(w, g, cfg, report)
    return w, report


def _p_plus_certificate(w: DiskField, g: DiskField, cfg: SolveConfig, report: SolveReport):
    """P+(tr w) = tr g when g carries its trace."""
    if g.trace is None or w.trace is None:
        return
    projected = analytic_projection(w.boundary()).coeffs
    scale = max(float(np.max(np.abs(g.trace))), 1.0)
    gap = float(np.max(np.abs(projected - g.trace))) / scale
    report.add_certificate("p_plus", gap, cfg.inner_tol)
