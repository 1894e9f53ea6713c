"""
Transport of Dirichlet problems between the disk and psi(D).

A function F on Omega = psi(D) is a solution for nu when F o psi solves the
equation on D for nu o psi. The Wirtinger derivatives of nu o psi follow from
the chain rule: d(nu o psi) = (d nu)(psi) psi', dbar(nu o psi) = (dbar nu)(psi) conj(psi').
"""

from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import settings
from ..coeff.coefficient import Coefficient, sigma_from_nu
from ..coeff.expressions import RealExpression
from ..grid.circle import BoundarySpectrum, CircleGrid
from ..grid.fields import DiskField
from ..grid.radial import RadialRule
from ..solver.config import SolveConfig
from ..solver.dirichlet import dirichlet_u
from ..utils.errors import ConfigurationError
from ..utils.logger import get_logger
from .conformal import ConformalMap, MobiusAutomorphism

logger = get_logger(__name__, settings.LOG_LEVEL)

PointFunction = Callable[[np.ndarray], np.ndarray]
DEFAULT_CHECK_POINTS = (0.0, 0.3, -0.25j, 0.2 + 0.2j, -0.3 + 0.1j)


def _as_expression(value: Union[str, float, RealExpression]) -> RealExpression:
    if isinstance(value, RealExpression):
        return value
    return RealExpression.parse(str(value))


def pullback_problem(cmap: ConformalMap, nu_on_omega: Union[str, float, RealExpression],
                     boundary_data_on_omega: Union[str, PointFunction],
                     grid: CircleGrid, rule: RadialRule) -> Tuple[Coefficient, BoundarySpectrum]:
    """
    Coefficient nu o psi on the disk grid and boundary data (phi o psi)|_T.

    Args:
        cmap: checked conformal map
        nu_on_omega: expression in x, y for the dilatation on Omega
        boundary_data_on_omega: expression in x, y or a callable of the
            complex point w in Omega

    Raises:
        ConfigurationError: If an expression is invalid or nu o psi is not admissible
    """
    expr = _as_expression(nu_on_omega)
    nu = expr.function()
    d_nu, dbar_nu = expr.wirtinger()

    def pulled(z):
        return nu(cmap.psi(z))

    def pulled_d(z):
        return d_nu(cmap.psi(z)) * cmap.dpsi(z)

    def pulled_dbar(z):
        return dbar_nu(cmap.psi(z)) * np.conj(cmap.dpsi(z))

    if isinstance(boundary_data_on_omega, str):
        data = RealExpression.parse(boundary_data_on_omega).function()
    else:
        data = boundary_data_on_omega
    phi = BoundarySpectrum.from_samples(np.real(np.asarray(data(cmap.psi(grid.points)))), grid, real=True)

    label = f"nu = {expr.text} pulled back by {cmap.name}"
    if expr.is_constant:
        return Coefficient.constant(float(expr.expr), grid, rule), phi
    try:
        coef = Coefficient.from_functions(pulled, pulled_d, pulled_dbar, grid, rule, label=label)
    except ValueError as e:
        raise ConfigurationError(str(e)) from e
    return coef, phi


def pushforward_solution(cmap: ConformalMap, disk_solution: DiskField,
                         include_boundary: bool = True) -> pd.DataFrame:
    """
    Point cloud (x, y, re, im) of the solution at the images psi(z) of the grid
    nodes; the boundary circle is appended when the field carries a trace.
    """
    grid, rule = disk_solution.grid, disk_solution.rule
    z = rule.nodes[:, None] * grid.points[None, :]
    values = disk_solution.synthesize()
    if include_boundary and disk_solution.has_trace:
        z = np.vstack([z, grid.points[None, :]])
        values = np.vstack([values, disk_solution.trace_samples()[None, :]])
    w = cmap.psi(z).ravel()
    values = values.ravel()
    return pd.DataFrame({"x": w.real, "y": w.imag, "re": values.real, "im": values.imag})


def _stencil(u_on_omega: PointFunction, w: complex, h: float):
    """Gradient and Laplacian at w by fourth-order central differences."""
    offsets = np.array([-2, -1, 1, 2]) * h
    ux_pts = u_on_omega(w + offsets)
    uy_pts = u_on_omega(w + 1j * offsets)
    center = u_on_omega(np.array([w]))[0]
    first = np.array([1, -8, 8, -1]) / (12 * h)
    second = np.array([-1, 16, 16, -1]) / (12 * h * h)
    ux, uy = first @ ux_pts, first @ uy_pts
    laplacian = second @ ux_pts + second @ uy_pts - 60 * center / (12 * h * h)
    return ux, uy, laplacian


def pde_residual_check(cmap: ConformalMap, nu_on_omega: Union[str, float, RealExpression],
                       u: DiskField, points: Sequence[complex] = DEFAULT_CHECK_POINTS,
                       h: float = 0.05) -> dict:
    """
    Residual of div(sigma grad U) = 0 for U = u o psi^{-1} on Omega, by finite
    differences on a stencil around psi(z) for each disk point z. Relative to
    the size of the individual terms.
    """
    expr = _as_expression(nu_on_omega)
    nu = expr.function()
    d_nu, _ = expr.wirtinger()

    def u_on_omega(w):
        return u.evaluate(cmap.inverse(w)).real

    worst, scale = 0.0, 0.0
    for z in points:
        w = complex(cmap.psi(np.array([z]))[0])
        ux, uy, laplacian = _stencil(u_on_omega, w, h)
        nu_w = float(nu(np.array([w]))[0])
        dnu = complex(d_nu(np.array([w]))[0])
        nu_x, nu_y = 2 * dnu.real, -2 * dnu.imag
        sigma = float(sigma_from_nu(nu_w))
        factor = -2.0 / (1 + nu_w) ** 2
        sx, sy = factor * nu_x, factor * nu_y
        residual = sigma * laplacian + sx * ux + sy * uy
        worst = max(worst, abs(residual))
        scale = max(scale, sigma * abs(laplacian) + abs(sx * ux) + abs(sy * uy), abs(sigma) * np.hypot(ux, uy))
    relative = worst / scale if scale > 0 else worst
    logger.debug(f"pde_residual_check [{cmap.name}]: residual {worst:.3e}, relative {relative:.3e}")
    return {"residual": float(worst), "relative": float(relative), "points": len(points), "h": h}


def map_independence_check(cmap: ConformalMap, automorphism: MobiusAutomorphism,
                           nu_on_omega: Union[str, float, RealExpression],
                           boundary_data_on_omega: Union[str, PointFunction],
                           grid: CircleGrid, rule: RadialRule,
                           cfg: Optional[SolveConfig] = None,
                           points: Sequence[complex] = DEFAULT_CHECK_POINTS) -> dict:
    """
    Solve for Re F through psi and through psi o phi and compare at matched
    physical points: u_1(phi(z)) against u_2(z).
    """
    cfg = cfg or SolveConfig.from_settings()
    composed = cmap.compose(automorphism)
    coef1, phi1 = pullback_problem(cmap, nu_on_omega, boundary_data_on_omega, grid, rule)
    coef2, phi2 = pullback_problem(composed, nu_on_omega, boundary_data_on_omega, grid, rule)
    u1, _ = dirichlet_u(phi1, coef1, cfg)
    u2, _ = dirichlet_u(phi2, coef2, cfg)

    z = np.asarray(points, dtype=complex)
    first = u1.evaluate(automorphism.psi(z)).real
    second = u2.evaluate(z).real
    gap = float(np.max(np.abs(first - second)))
    scale = max(float(np.max(np.abs(first))), 1e-300)
    logger.info(f"map_independence_check [{cmap.name}]: max gap {gap:.3e} at {len(z)} points")
    return {"max_gap": gap, "relative": gap / scale, "points": len(z)}
