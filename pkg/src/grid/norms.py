"""
Norms on circles, the disk and the boundary.

Circle means are normalized: ||f||_{L^p(T_r)} = ((1/2pi) int |f(r e^{it})|^p dt)^{1/p}.
"""

from typing import Optional

import numpy as np

from .circle import BoundarySpectrum
from .fields import DiskField
from ..utils.errors import TraceError
from ..utils.validator import InputValidator


def lp_mean(values: np.ndarray, p: float, mask: Optional[np.ndarray] = None) -> float:
    """
    Normalized L^p norm of equispaced samples over the whole circle.
    With a mask, integrates over the masked subset only (same normalization).
    """
    values = np.abs(np.asarray(values))
    if mask is not None:
        values = np.where(mask, values, 0.0)
    return float(np.mean(values ** p) ** (1.0 / p))


def circle_norm(field: DiskField, r: float, p: float, n_nodes: int = 4) -> float:
    """
    Normalized L^p norm of the field on the circle of radius r.

    Args:
        field: disk field
        r: a radial node of the field's rule, or 1 for the boundary trace
        p: exponent in (1, inf)
        n_nodes: extrapolation stencil when the field carries no trace

    Raises:
        GridError: If r is not representable on the grid
    """
    p = InputValidator.validate_exponent(p)
    return lp_mean(field.circle_samples(r, n_nodes), p)


def hardy_norm(field: DiskField, p: float, n_nodes: int = 4) -> float:
    """
    Approximation of ess sup_{0<r<1} ||f||_{L^p(T_r)}: the maximum over all radial
    nodes and the boundary circle, whose mean is the limit as r -> 1.
    """
    p = InputValidator.validate_exponent(p)
    samples = np.abs(field.synthesize()) ** p
    value = float(np.max(np.mean(samples, axis=1)) ** (1.0 / p))
    try:
        boundary = lp_mean(field.circle_samples(1.0, n_nodes), p)
    except TraceError:
        return value
    return max(value, boundary)


def area_norm(field: DiskField) -> float:
    """L^2(D) norm with respect to area measure: sqrt(2 pi sum_n int |f_n|^2 rho d rho)."""
    power = np.abs(field.profiles) ** 2
    return float(np.sqrt(2 * np.pi * np.sum(power @ field.rule.weights)))


def area_lp_norm(field: DiskField, p: float) -> float:
    """Normalized L^p(D) norm: ((1/pi) int_D |f|^p dm)^{1/p}."""
    p = InputValidator.validate_exponent(p)
    circle_means = np.mean(np.abs(field.synthesize()) ** p, axis=1)
    return float((2.0 * np.sum(circle_means * field.rule.weights)) ** (1.0 / p))


def boundary_norm(phi: BoundarySpectrum, p: float) -> float:
    """Normalized L^p(T) norm."""
    p = InputValidator.validate_exponent(p)
    return lp_mean(phi.samples(), p)


def sobolev_norm(phi: BoundarySpectrum, p: float, order: int = 1) -> float:
    """
    W^{order,p}(T) norm, order in {0, 1}.

    The tangential derivative is d_t = d_theta / (2 pi), so that
    ||phi||^p_{W^{1,p}} = ||phi||_p^p + ||d_theta phi / (2 pi)||_p^p.
    """
    p = InputValidator.validate_exponent(p)
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order}")
    value = lp_mean(phi.samples(), p) ** p
    if order == 1:
        value += lp_mean(phi.derivative().samples() / (2 * np.pi), p) ** p
    return float(value ** (1.0 / p))


def fractional_seminorm(phi: BoundarySpectrum, s: float, p: float,
                        mask: Optional[np.ndarray] = None) -> float:
    """
    Slobodeckij seminorm (double integral of |phi(x)-phi(y)|^p / |x-y|^{1+sp}
    over T x T with respect to arclength)^{1/p}.

    Uses the chordal distance |e^{it} - e^{is}| and a tensor trapezoid rule with
    the diagonal cells excluded; first-order accurate. With a boolean mask the
    double integral runs over the masked subset only.
    """
    p = InputValidator.validate_exponent(p)
    s = InputValidator.validate_open_interval(s, 0.0, 1.0, "s")
    values = phi.samples()
    points = phi.grid.points
    if mask is not None:
        keep = np.asarray(mask, dtype=bool)
        values, points = values[keep], points[keep]
    h = 2 * np.pi / phi.grid.n_theta
    distance = np.abs(points[:, None] - points[None, :])
    np.fill_diagonal(distance, 1.0)
    kernel = np.abs(values[:, None] - values[None, :]) ** p / distance ** (1 + s * p)
    np.fill_diagonal(kernel, 0.0)
    return float((h * h * kernel.sum()) ** (1.0 / p))


def fractional_sobolev_norm(phi: BoundarySpectrum, p: float,
                            mask: Optional[np.ndarray] = None) -> float:
    """W^{1-1/p,p} norm: L^p part plus the seminorm of order 1 - 1/p."""
    lp = lp_mean(phi.samples(), p, mask)
    semi = fractional_seminorm(phi, 1.0 - 1.0 / p, p, mask)
    return float((lp ** p + semi ** p) ** (1.0 / p))
