"""
Density of restricted traces on an arc set I and the blow-up on its complement J.

For a target u_I + i v_I on I, the J-part u_J and a constant c are fitted so that
(u_I v u_J) + i H_nu(u_I v u_J) + i c reproduces the target on I. The fit is a
least-squares problem over columns H_nu(0 v e_k)|_I, one solve per basis
function e_k supported on J.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.linalg import lstsq

from config.settings import settings
from ..coeff.coefficient import Coefficient
from ..grid.circle import BoundarySpectrum, CircleGrid
from ..grid.norms import fractional_sobolev_norm, lp_mean
from ..solver.config import SolveConfig
from ..solver.dirichlet import hilbert_nu
from ..utils.logger import get_logger
from .columns import hilbert_columns, trig_basis

logger = get_logger(__name__, settings.LOG_LEVEL)

DEFAULT_SCHEDULE = (4, 8, 16, 32)


@dataclass(frozen=True, eq=False)
class ArcSplit:
    """
    Partition of the theta-grid into an arc set I and its complement J.

    Attributes:
        grid: circle grid
        inside: boolean mask of I
    """

    grid: CircleGrid
    inside: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.inside, dtype=bool)
        if mask.shape != (self.grid.n_theta,):
            raise ValueError(f"mask has shape {mask.shape}, expected ({self.grid.n_theta},)")
        if mask.all():
            raise ValueError("the complement J of I must have positive measure")
        mask.setflags(write=False)
        object.__setattr__(self, "inside", mask)

    @classmethod
    def from_arcs(cls, grid: CircleGrid, arcs: Sequence[Sequence[float]]) -> "ArcSplit":
        """I = union of the open arcs (a, b), angles taken modulo 2 pi."""
        theta = grid.theta
        mask = np.zeros(grid.n_theta, dtype=bool)
        for a, b in arcs:
            length = (b - a) % (2 * np.pi)
            offset = (theta - a) % (2 * np.pi)
            mask |= (offset > 0) & (offset < length)
        return cls(grid, mask)

    @classmethod
    def upper_semicircle(cls, grid: CircleGrid) -> "ArcSplit":
        return cls.from_arcs(grid, [(0.0, np.pi)])

    @property
    def outside(self) -> np.ndarray:
        return ~self.inside

    def concatenate(self, u_inside: np.ndarray, u_outside: np.ndarray) -> np.ndarray:
        """u_I v u_J as grid samples."""
        return np.where(self.inside, u_inside, u_outside)

    def cutoff(self, width: float = 2.0) -> np.ndarray:
        """
        C^1 cutoff supported in J: 0 on I, rising as a smoothstep over `width`
        grid cells of distance from I, 1 further inside J.
        """
        n = self.grid.n_theta
        idx = np.arange(n)
        inside = np.flatnonzero(self.inside)
        if inside.size == 0:
            return np.ones(n)
        gap = np.abs(idx[:, None] - inside[None, :])
        distance = np.minimum(gap, n - gap).min(axis=1).astype(float)
        t = np.clip(distance / width, 0.0, 1.0)
        return t * t * (3.0 - 2.0 * t)


def _complement_basis(split: ArcSplit, size: int) -> List[BoundarySpectrum]:
    """Constant plus the first size - 1 trigonometric functions, cut off to J."""
    grid = split.grid
    cutoff = split.cutoff()
    raw = [np.ones(grid.n_theta)] + [b.samples() for b in trig_basis(grid, size - 1)]
    return [BoundarySpectrum.from_samples(values * cutoff, grid, real=True) for values in raw]


def _solve_ridge(A: np.ndarray, b: np.ndarray, ridge: float) -> np.ndarray:
    if not np.any(b):
        return np.zeros(A.shape[1])
    k = A.shape[1]
    stacked = np.vstack([A, np.sqrt(ridge) * np.eye(k)])
    coeffs, *_ = lstsq(stacked, np.concatenate([b, np.zeros(k)]))
    return coeffs


def _schedule(schedule: Sequence[int], grid: CircleGrid) -> List[int]:
    schedule = sorted(int(k) for k in schedule)
    if not schedule or schedule[0] < 1:
        raise ValueError("K schedule must contain positive sizes")
    if schedule[-1] - 1 > 2 * grid.M:
        raise ValueError(f"basis size {schedule[-1]} exceeds the available trig functions")
    return schedule


def _zero_extension(target: np.ndarray, split: ArcSplit) -> BoundarySpectrum:
    return BoundarySpectrum.from_samples(split.concatenate(np.real(target), 0.0), split.grid, real=True)


def _hilbert_or_zero(phi: BoundarySpectrum, coef: Coefficient, cfg: SolveConfig) -> BoundarySpectrum:
    if not np.any(phi.coeffs):
        return BoundarySpectrum.zeros(phi.grid)
    return hilbert_nu(phi, coef, cfg)


def density_experiment(target: np.ndarray, split: ArcSplit, coef: Coefficient,
                       cfg: Optional[SolveConfig] = None,
                       schedule: Sequence[int] = DEFAULT_SCHEDULE,
                       ridge: Optional[float] = None,
                       threads: Optional[int] = None) -> pd.DataFrame:
    """
    Approximate target|_I by traces of normalized solutions.

    Args:
        target: complex samples on the grid (values on J are ignored)
        split: the I/J partition
        coef: dilatation
        schedule: basis sizes K; the bases are nested so the error on I
            does not increase along the schedule
        ridge: Tikhonov weight of the least squares

    Returns:
        DataFrame with columns K, error_I (L^2(I)), norm_J (L^2(J) of the trace), c
    """
    cfg = cfg or SolveConfig.from_settings()
    ridge = settings.DENSITY_RIDGE if ridge is None else ridge
    schedule = _schedule(schedule, coef.grid)
    target = np.asarray(target, dtype=complex)
    I, J = split.inside, split.outside

    u0 = _zero_extension(target, split)
    h0 = _hilbert_or_zero(u0, coef, cfg)
    v = (target.imag - h0.samples())[I]

    basis = _complement_basis(split, schedule[-1])
    columns = hilbert_columns(basis, coef, cfg, threads)
    column_samples = np.array([c.samples()[I] for c in columns]).T
    ones = np.ones((I.sum(), 1))

    rows = []
    for K in schedule:
        A = np.hstack([column_samples[:, :K], ones])
        coeffs = _solve_ridge(A, v, ridge)
        a, c = coeffs[:K], coeffs[K]
        u = u0.samples() + sum((a[k] * basis[k].samples() for k in range(K)), np.zeros(coef.grid.n_theta))
        h = h0.samples() + sum((a[k] * columns[k].samples() for k in range(K)), np.zeros(coef.grid.n_theta))
        psi = u + 1j * (h + c)
        rows.append({
            "K": K,
            "error_I": lp_mean(psi - target, 2.0, I),
            "norm_J": lp_mean(psi, 2.0, J),
            "c": float(c),
        })
        logger.debug(f"density K={K}: error_I {rows[-1]['error_I']:.3e}, norm_J {rows[-1]['norm_J']:.3e}")
    return pd.DataFrame(rows, columns=["K", "error_I", "norm_J", "c"])


def density_sobolev_experiment(target: np.ndarray, split: ArcSplit, coef: Coefficient,
                               cfg: Optional[SolveConfig] = None,
                               schedule: Sequence[int] = DEFAULT_SCHEDULE,
                               ridge: Optional[float] = None,
                               threads: Optional[int] = None) -> pd.DataFrame:
    """
    Same construction in W^{1-1/p,p}(I).

    target must be smooth on the whole grid (an extension of the data on I). Its
    real part is extended into J through the complement of the cutoff so the
    starting function has no jump at the arc endpoints. The least squares fits
    values and theta-derivatives on I; the error is the fractional Sobolev norm
    restricted to I.

    Returns:
        DataFrame with columns K, error_I, norm_J (L^p(J)), c
    """
    cfg = cfg or SolveConfig.from_settings()
    ridge = settings.DENSITY_RIDGE if ridge is None else ridge
    schedule = _schedule(schedule, coef.grid)
    grid = coef.grid
    target = np.asarray(target, dtype=complex)
    I, J = split.inside, split.outside

    target_spec = BoundarySpectrum.from_samples(target, grid, real=False)
    d_target = target_spec.derivative().samples()

    u0 = BoundarySpectrum.from_samples(target.real * (1.0 - split.cutoff()), grid, real=True)
    h0 = _hilbert_or_zero(u0, coef, cfg)
    rhs = np.concatenate([
        (target.imag - h0.samples())[I],
        (d_target.imag - h0.derivative().samples())[I] / (2 * np.pi),
    ])

    basis = _complement_basis(split, schedule[-1])
    columns = hilbert_columns(basis, coef, cfg, threads)
    values = np.array([c.samples()[I] for c in columns]).T
    slopes = np.array([c.derivative().samples()[I] for c in columns]).T / (2 * np.pi)
    constant = np.concatenate([np.ones(I.sum()), np.zeros(I.sum())])[:, None]

    rows = []
    for K in schedule:
        A = np.hstack([np.vstack([values[:, :K], slopes[:, :K]]), constant])
        coeffs = _solve_ridge(A, rhs, ridge)
        a, c = coeffs[:K], coeffs[K]
        trace = u0 + h0 * 1j + BoundarySpectrum.from_modes({0: 1j * c}, grid)
        for k in range(K):
            trace = trace + (basis[k] + columns[k] * 1j) * a[k]
        gap = BoundarySpectrum.from_samples(trace.samples() - target, grid, real=False)
        rows.append({
            "K": K,
            "error_I": fractional_sobolev_norm(gap, cfg.p, I),
            "norm_J": lp_mean(trace.samples(), cfg.p, J),
            "c": float(c),
        })
    return pd.DataFrame(rows, columns=["K", "error_I", "norm_J", "c"])
