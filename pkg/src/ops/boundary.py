"""
Boundary operators: Cauchy integral, analytic projection and the classical
harmonic conjugation. All are exact Fourier multipliers.
"""

from typing import Optional

import numpy as np

from config.settings import settings
from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..grid.radial import RadialRule


def default_rule() -> RadialRule:
    return RadialRule(settings.RADIAL_PANELS, settings.NODES_PER_PANEL)


def cauchy_boundary(psi: BoundarySpectrum, rule: Optional[RadialRule] = None) -> DiskField:
    """
    Cauchy integral of boundary data: mode n >= 0 has profile psi_n r^n,
    negative modes vanish. The trace is the analytic projection of psi.
    """
    rule = rule or default_rule()
    grid = psi.grid
    modes = grid.modes
    analytic = modes >= 0
    coeffs = np.where(analytic, psi.coeffs, 0.0)
    powers = rule.nodes[None, :] ** np.where(analytic, modes, 0)[:, None]
    return DiskField(coeffs[:, None] * powers, grid, rule, coeffs)


def analytic_projection(psi: BoundarySpectrum) -> BoundarySpectrum:
    """P+: zero the negative modes."""
    return BoundarySpectrum(np.where(psi.grid.modes >= 0, psi.coeffs, 0.0), psi.grid)


def conjugation_h0(phi: BoundarySpectrum) -> BoundarySpectrum:
    """
    Classical conjugate function: multiplier -i sgn(n), zero mean.

    Raises:
        ValueError: If phi is not real-valued
    """
    if not phi.is_real_valued:
        raise ValueError("conjugation_h0 expects a real-valued spectrum")
    return BoundarySpectrum(-1j * np.sign(phi.grid.modes) * phi.coeffs, phi.grid, True)
