"""
Boundary behaviour of disk fields: nontangential maximal function,
L^p convergence of circle restrictions to the trace, log-integral of the trace.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from config.settings import settings
from ..grid.fields import DiskField
from ..grid.norms import lp_mean
from ..ops.trace import best_trace
from ..utils.logger import get_logger
from ..utils.validator import InputValidator

logger = get_logger(__name__, settings.LOG_LEVEL)


@dataclass(frozen=True)
class SectorConfig:
    """
    Sample points of the sector with vertex xi = 1 and half-aperture beta:
    z = 1 - t e^{i phi}, t = 2^{-k} (k = 1..levels), phi spread over (-beta, beta).
    Rotating by xi gives the sector at any boundary point.
    """

    aperture: float = np.pi / 4
    levels: int = 8
    angles: int = 8

    def __post_init__(self):
        InputValidator.validate_open_interval(self.aperture, 0.0, np.pi / 2, "aperture")

    @classmethod
    def from_settings(cls) -> "SectorConfig":
        levels = max(int(round(np.sqrt(settings.SECTOR_POINTS))), 1)
        return cls(settings.SECTOR_APERTURE, levels, max(settings.SECTOR_POINTS // levels, 1))

    @cached_property
    def offsets(self) -> np.ndarray:
        t = 2.0 ** -np.arange(1, self.levels + 1)
        phi = -self.aperture + (np.arange(self.angles) + 0.5) * (2 * self.aperture / self.angles)
        z = (1.0 - t[:, None] * np.exp(1j * phi[None, :])).ravel()
        return z[np.abs(z) < 1.0]

    def contains(self, z: np.ndarray, xi: complex = 1.0) -> np.ndarray:
        """Points of the open disk inside the sector at xi."""
        z = np.asarray(z, dtype=complex)
        direction = (xi - z) / xi
        return (np.abs(z) < 1.0) & (np.abs(np.angle(direction)) < self.aperture) & (np.abs(direction) > 0)


@dataclass(frozen=True)
class MaximalFunction:
    values: np.ndarray
    norm: float
    trace_norm: float

    @property
    def ratio(self) -> float:
        return self.norm / self.trace_norm if self.trace_norm > 0 else float("inf")


def nontangential_max(field: DiskField, sectors: Optional[SectorConfig] = None,
                      p: Optional[float] = None) -> MaximalFunction:
    """
    M(xi) = max |field| over the sector samples at every grid angle, with
    ||M||_p and ||tr field||_p.
    """
    sectors = sectors or SectorConfig.from_settings()
    p = p or settings.P
    grid = field.grid
    offsets = sectors.offsets
    profiles = field.profiles_at(np.abs(offsets))
    phases = np.exp(1j * np.outer(grid.modes, np.angle(offsets)))
    values = np.abs(grid.ifft_modes((profiles * phases).T))
    M = values.max(axis=0)
    trace = best_trace(field).samples()
    return MaximalFunction(M, lp_mean(M, p), lp_mean(trace, p))


def fatou_convergence(field: DiskField, p: Optional[float] = None,
                      radii: Optional[Sequence[float]] = None) -> pd.DataFrame:
    """
    Table of (r, ||field(r .) - tr field||_{L^p(T)}) over the given radii
    (by default the radial nodes with r >= 1/2).
    """
    p = p or settings.P
    nodes = field.rule.nodes
    if radii is None:
        radii = nodes[nodes >= 0.5]
    trace = best_trace(field).samples()
    radii = np.asarray(radii, dtype=float)
    circles = field.grid.ifft_modes(field.profiles_at(radii).T)
    rows = [{"r": float(r), "error": lp_mean(values - trace, p)} for r, values in zip(radii, circles)]
    table = pd.DataFrame(rows, columns=["r", "error"])
    table["decreasing"] = table["error"].diff().fillna(0.0) <= 1e-14
    return table


def log_integral_diagnostic(field: DiskField) -> float:
    """(1/2pi) int log |tr field| d theta; -inf when the trace vanishes at a grid angle."""
    modulus = np.abs(best_trace(field).samples())
    if np.any(modulus == 0):
        return float("-inf")
    return float(np.mean(np.log(modulus)))
