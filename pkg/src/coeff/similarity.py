"""
Similarity transform between solutions of the conjugate Beltrami equation
dbar f = nu conj(d f) and solutions of dbar w = alpha conj(w).
"""

import numpy as np

from config.settings import settings
from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..utils.logger import get_logger
from .coefficient import Coefficient, sigma_from_nu

logger = get_logger(__name__, settings.LOG_LEVEL)

CROSS_CHECK_TOL = 1e-10


def _forward(f: np.ndarray, nu: np.ndarray) -> np.ndarray:
    nu = nu.real
    return (f - nu * np.conj(f)) / np.sqrt(1 - nu ** 2)


def _forward_split(f: np.ndarray, nu: np.ndarray) -> np.ndarray:
    sigma = sigma_from_nu(nu.real)
    return np.sqrt(sigma) * f.real + 1j * f.imag / np.sqrt(sigma)


def _inverse(w: np.ndarray, nu: np.ndarray) -> np.ndarray:
    nu = nu.real
    return (w + nu * np.conj(w)) / np.sqrt(1 - nu ** 2)


def similarity_forward(f: DiskField, coef: Coefficient) -> DiskField:
    """
    w = (f - nu conj(f)) / sqrt(1 - nu^2).

    The equivalent split form sigma^{1/2} Re f + i sigma^{-1/2} Im f is
    evaluated as well; a disagreement is logged.
    """
    w = DiskField.combine(_forward, f, coef.nu, padded=True)
    split = DiskField.combine(_forward_split, f, coef.nu, padded=True)
    scale = max(float(np.max(np.abs(w.profiles), initial=0.0)), 1e-300)
    gap = float(np.max(np.abs(w.profiles - split.profiles), initial=0.0))
    if gap > CROSS_CHECK_TOL * scale:
        logger.warning(f"similarity forms disagree: {gap:.3e} (scale {scale:.3e})")
    return w


def similarity_inverse(w: DiskField, coef: Coefficient) -> DiskField:
    """f = (w + nu conj(w)) / sqrt(1 - nu^2)."""
    return DiskField.combine(_inverse, w, coef.nu, padded=True)


def similarity_forward_boundary(trace_f: BoundarySpectrum, coef: Coefficient) -> BoundarySpectrum:
    """Boundary version: Re tr w = sigma^{1/2} Re tr f, Im tr w = sigma^{-1/2} Im tr f."""
    nu = coef.nu_boundary()
    return BoundarySpectrum.from_samples(_forward(trace_f.grid.ifft_modes(trace_f.coeffs), nu + 0j),
                                         trace_f.grid, real=False)


def similarity_inverse_boundary(trace_w: BoundarySpectrum, coef: Coefficient) -> BoundarySpectrum:
    nu = coef.nu_boundary()
    return BoundarySpectrum.from_samples(_inverse(trace_w.grid.ifft_modes(trace_w.coeffs), nu + 0j),
                                         trace_w.grid, real=False)
