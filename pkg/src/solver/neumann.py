"""
Neumann problem for div(sigma grad u) = 0 with normal derivative g.

On the circle d_theta(Im tr f) = sigma d_n u, so Im tr f is an antiderivative
of sigma g. With h = -i f (which solves the equation with -nu) the data
become a Dirichlet condition Re tr h = v, and u = -Im h. The reported d_n u is
d_theta(Re tr h) / sigma, cross-checked against a radial stencil at the
outer nodes.
"""

from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from ..coeff.coefficient import Coefficient
from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..grid.norms import boundary_norm
from ..utils.errors import CompatibilityError
from ..utils.logger import get_logger
from .config import SolveConfig
from .dirichlet import dirichlet_h
from .report import SolveReport

logger = get_logger(__name__, settings.LOG_LEVEL)


def weighted_flux(g: BoundarySpectrum, coef: Coefficient) -> BoundarySpectrum:
    """sigma g on the circle."""
    return BoundarySpectrum.from_samples(g.samples() * coef.sigma_boundary(), g.grid, real=True)


def neumann(g: BoundarySpectrum, coef: Coefficient, cfg: Optional[SolveConfig] = None,
            compatibility_tol: Optional[float] = None) -> Tuple[DiskField, SolveReport]:
    """
    u with d_n u = g on the circle and zero boundary mean.

    Args:
        g: real Neumann data
        coef: coefficient
        cfg: solver configuration
        compatibility_tol: bound on |mean(sigma g)| relative to ||sigma g||_2
            (defaults to cfg.outer_tol)

    Raises:
        ValueError: If g is not real-valued
        CompatibilityError: If (1/2pi) int sigma g exceeds the tolerance
    """
    if not g.is_real_valued:
        raise ValueError("Neumann data must be real-valued")
    cfg = cfg or SolveConfig.from_settings()
    tol = cfg.outer_tol if compatibility_tol is None else compatibility_tol

    flux = weighted_flux(g, coef)
    mean = float(flux.mean())
    scale = max(boundary_norm(flux, 2.0), 1e-300)
    if abs(mean) > tol * scale:
        raise CompatibilityError(
            f"Neumann data violate the compatibility condition: (1/2pi) int sigma g = {mean:.3e} "
            f"(tolerance {tol * scale:.1e})",
            weighted_mean=mean,
        )

    v = flux.antiderivative()
    h, report = dirichlet_h(v, coef.negated(), cfg)
    u = -h.imag()
    shift = float(u.boundary().coeff(0).real)
    if shift != 0.0:
        u = u - DiskField.from_callable(lambda z: np.full(np.shape(z), shift), u.grid, u.rule)

    dn_u = normal_derivative(h, coef)
    stencil = stencil_normal_derivative(u, cfg.trace_nodes)
    report.diagnostics["compatibility_mean"] = mean
    report.diagnostics["normal_derivative_error"] = _relative_gap(dn_u, g)
    report.diagnostics["normal_derivative_stencil_gap"] = _relative_gap(stencil, dn_u)
    return u, report


def _relative_gap(a: BoundarySpectrum, b: BoundarySpectrum) -> float:
    norm = boundary_norm(b, 2.0)
    gap = boundary_norm(a - b, 2.0)
    return gap / norm if norm > 0 else gap


def normal_derivative(h: DiskField, coef: Coefficient) -> BoundarySpectrum:
    """d_n u = d_theta(Re tr h) / sigma from the solved trace."""
    v = h.boundary().real_part()
    return BoundarySpectrum.from_samples(v.derivative().samples() / coef.sigma_boundary(), v.grid, real=True)


def stencil_normal_derivative(u: DiskField, n_nodes: int = 4) -> BoundarySpectrum:
    """d_r u extrapolated to r = 1 through the outermost n_nodes radial nodes."""
    return BoundarySpectrum(u.d_r().extrapolated_trace(n_nodes), u.grid).real_part()
