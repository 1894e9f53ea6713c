"""
Area operators on the disk: the solid Cauchy transform T, the Beurling
transform S = d/dz T and the reflected kernel z / (1 - conj(zeta) z).

T w(z) = -(1/pi) int_D w(xi) / (xi - z) dm(xi), so that d/dzbar T w = w.
"""

import numpy as np

from ..grid.fields import DiskField
from .workspace import workspace_for


def _shift_down(profiles: np.ndarray, by: int = 1) -> np.ndarray:
    """out[i] = profiles[i + by] (mode m receives mode m + by)."""
    out = np.zeros_like(profiles)
    out[:-by] = profiles[by:]
    return out


def cauchy_area(w: DiskField) -> DiskField:
    """
    Solid Cauchy transform. Output mode m is computed from input mode m + 1
    by the workspace recurrences; the r = 1 trace is evaluated from the same
    formulas (it lives in negative modes only).
    """
    ws = workspace_for(w)
    source = _shift_down(w.profiles)
    profiles = ws.cauchy_profiles(source)
    trace = np.einsum("ml,ml->m", ws.boundary_weights, source)
    return w.like(profiles, trace)


def beurling(w: DiskField) -> DiskField:
    """
    d/dz of cauchy_area(w), differentiated analytically:
    (S w)_m(r) = (m+1) (T w)_{m+1}(r) / r + w_{m+2}(r).
    """
    T = cauchy_area(w)
    modes = w.grid.modes
    scaled = modes[:, None] * T.profiles / w.rule.nodes[None, :]
    profiles = _shift_down(scaled) + _shift_down(w.profiles, 2)
    trace = None
    if w.trace is not None:
        trace = _shift_down(modes * T.trace) + _shift_down(w.trace, 2)
    return w.like(profiles, trace)


def reflect_area(r_field: DiskField, variant: str = "+") -> DiskField:
    """
    Second summand of the factorization exponent,
    -(1/pi) int_D z conj(r(zeta)) / (1 - conj(zeta) z) dm(zeta),
    with sign +1 for variant "+" and -1 for variant "-".

    Expanding z/(1 - conj(zeta) z) = sum_k conj(zeta)^k z^{k+1} gives a holomorphic
    field whose mode m >= 1 is -2 r^m int_0^1 conj(r_{1-m}(rho)) rho^m d rho.
    """
    sign = _variant_sign(variant)
    ws = workspace_for(r_field)
    grid, rule = r_field.grid, r_field.rule
    M = grid.M
    ms = np.arange(1, M + 1)
    out_idx = ms + M
    in_idx = 1 - ms + M
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    coeffs[out_idx] = -2.0 * sign * np.sum(ws.reflect_weights[out_idx] * np.conj(r_field.profiles[in_idx]), axis=1)
    powers = rule.nodes[None, :] ** np.maximum(grid.modes, 0)[:, None]
    return r_field.like(coeffs[:, None] * powers, coeffs)


def _variant_sign(variant: str) -> int:
    if variant in ("+", "plus"):
        return 1
    if variant in ("-", "minus"):
        return -1
    raise ValueError(f"variant must be '+' or '-', got {variant!r}")
