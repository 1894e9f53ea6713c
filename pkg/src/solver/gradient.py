"""
Gradients of solutions: W = (1 - nu^2)^{1/2} d f, which solves
dbar W = alpha_1 conj(W), and the boundary limit of d f from the trace.
"""

from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from ..coeff.coefficient import Coefficient, alpha1_from_nu
from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..grid.norms import hardy_norm
from ..utils.logger import get_logger
from .config import SolveConfig
from .report import SolveReport

logger = get_logger(__name__, settings.LOG_LEVEL)


def _interior(field: DiskField, inner: Tuple[float, float]) -> np.ndarray:
    nodes = field.rule.nodes
    return field.synthesize()[(nodes > inner[0]) & (nodes < inner[1])]


def gradient_field(f: DiskField, coef: Coefficient, cfg: Optional[SolveConfig] = None,
                   inner: Tuple[float, float] = (0.05, 0.95)) -> Tuple[DiskField, SolveReport]:
    """
    W = (1 - nu^2)^{1/2} d f.

    The report carries the residual of dbar W = alpha_1 conj(W) on nodes with
    inner[0] < r < inner[1] (relative to sup |W| there) and the Hardy norms
    of d f and dbar f.
    """
    cfg = cfg or SolveConfig.from_settings()
    report = SolveReport()
    df = f.dz()
    W = DiskField.combine(lambda d, nu: np.sqrt(1 - nu.real ** 2) * d, df, coef.nu, padded=True)

    residual = W.dzbar() - alpha1_from_nu(coef).multiply(W.conj())
    scale = float(np.max(np.abs(_interior(W, inner)), initial=0.0))
    value = float(np.max(np.abs(_interior(residual, inner)), initial=0.0))
    relative = value / scale if scale > 0 else value
    report.diagnostics["gradient_equation_residual"] = relative
    report.add_norm("df_hardy", hardy_norm(df, cfg.p, cfg.trace_nodes))
    report.add_norm("dbar_f_hardy", hardy_norm(f.dzbar(), cfg.p, cfg.trace_nodes))
    logger.debug(f"gradient_field: equation residual {relative:.3e}")
    return W, report


def boundary_derivative(trace_f: BoundarySpectrum, coef: Coefficient,
                        cfg: Optional[SolveConfig] = None) -> BoundarySpectrum:
    """
    Nontangential limit of d f from the trace:
    -i e^{-i theta} (d_theta tr f - nu d_theta conj(tr f)) / (1 - nu^2).
    """
    grid = trace_f.grid
    nu = coef.nu_boundary()
    d = grid.ifft_modes(trace_f.derivative().coeffs)
    values = -1j * np.conj(grid.points) * (d - nu * np.conj(d)) / (1 - nu ** 2)
    return BoundarySpectrum.from_samples(values.astype(complex), grid, real=False)


def gradient_trace(f: DiskField, n_nodes: int = 4) -> BoundarySpectrum:
    """Boundary values of d f by radial extrapolation (independent of the trace formula)."""
    return BoundarySpectrum(f.dz().extrapolated_trace(n_nodes), f.grid)
