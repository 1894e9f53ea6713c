"""
Factorization w = exp(s) F of solutions of dbar w = alpha conj(w) with a
bounded exponent s and a holomorphic factor F.

With r = alpha conj(w)/w (0 where w vanishes), s = T r + reflect_area(r)
satisfies dbar s = r, so dbar(exp(-s) w) = exp(-s)(alpha conj(w) - r w) = 0.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from config.settings import settings
from ..coeff.coefficient import AlphaField
from ..grid.fields import DiskField
from ..ops.area import cauchy_area, reflect_area
from ..utils.logger import get_logger

logger = get_logger(__name__, settings.LOG_LEVEL)

VARIANTS = ("plus", "minus")
BOUND_SLACK = 1e-6
BOUNDARY_TOL = 1e-8


def _canonical(variant: str) -> str:
    aliases = {"+": "plus", "plus": "plus", "-": "minus", "minus": "minus"}
    if variant not in aliases:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return aliases[variant]


def compute_r(w: DiskField, alpha: AlphaField, zero_threshold: Optional[float] = None) -> DiskField:
    """
    r = alpha conj(w) / w pointwise; r = 0 where |w| < zero_threshold * sup |w|.
    """
    threshold = (settings.ZERO_THRESHOLD if zero_threshold is None else zero_threshold) * w.sup_norm()

    def ratio(a, values):
        small = np.abs(values) < max(threshold, 1e-300)
        safe = np.where(small, 1.0, values)
        return np.where(small, 0.0, a * np.conj(safe) / safe)

    return DiskField.combine(ratio, alpha.alpha, w)


def compute_s(r_field: DiskField, variant: str = "plus") -> DiskField:
    """s = T r + reflect_area(r, variant); dbar s = r for both variants."""
    sign = "+" if _canonical(variant) == "plus" else "-"
    return cauchy_area(r_field) + reflect_area(r_field, sign)


@dataclass(frozen=True, eq=False)
class Factorization:
    """
    Attributes:
        s: bounded exponent
        F: holomorphic factor exp(-s) w
        r: the field alpha conj(w)/w
        variant: "plus" or "minus"
        certificates: name -> {measured, threshold, passed}
    """

    s: DiskField
    F: DiskField
    r: DiskField
    variant: str
    certificates: Dict[str, Dict[str, float]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.certificates.values())

    @property
    def vanishing_component(self) -> str:
        """'real' or 'imag': the boundary component of s that is smaller on the circle."""
        re = self.certificates["boundary_re_s"]["measured"]
        im = self.certificates["boundary_im_s"]["measured"]
        return "real" if re <= im else "imag"

    def to_dict(self) -> dict:
        return {"variant": self.variant, "passed": self.passed,
                "vanishing_component": self.vanishing_component,
                "certificates": self.certificates}


def _cert(measured: float, threshold: float) -> Dict[str, float]:
    return {"measured": float(measured), "threshold": float(threshold), "passed": bool(measured <= threshold)}


def equation_residual(w: DiskField, alpha: AlphaField) -> float:
    """sup |dbar w - alpha conj(w)| / sup |w| over the grid nodes."""
    gap = w.dzbar() - alpha.alpha.multiply(w.conj())
    scale = float(np.max(np.abs(w.synthesize())))
    return float(np.max(np.abs(gap.synthesize()))) / scale if scale > 0 else 0.0


def factorize(w: DiskField, alpha: AlphaField, variant: str = "plus",
              holomorphy_threshold: Optional[float] = None,
              declared_residual: float = 1e-4) -> Factorization:
    """
    Factor w = exp(s) F. Certification failures are recorded, not raised.

    Args:
        w: solution of dbar w = alpha conj(w) (checked spectrally; a warning is
            logged when the residual exceeds declared_residual)
        alpha: coefficient
        variant: "plus"/"+" or "minus"/"-"
        holomorphy_threshold: bound on the negative-mode fraction of F
    """
    variant = _canonical(variant)
    threshold = settings.HOLOMORPHY_THRESHOLD if holomorphy_threshold is None else holomorphy_threshold

    residual = equation_residual(w, alpha)
    if residual > declared_residual:
        logger.warning(f"factorize: w solves the equation only to {residual:.2e} "
                       f"(declared {declared_residual:.1e})")

    r = compute_r(w, alpha)
    s = compute_s(r, variant)
    F = DiskField.combine(lambda s_, w_: np.exp(-s_) * w_, s, w, padded=True)

    alpha_sup = alpha.sup_norm
    s_sup = s.sup_norm()
    trace_s = s.trace_samples()

    certificates = {
        "s_bound": _cert(s_sup, 4 * alpha_sup + BOUND_SLACK),
        "boundary_re_s": _cert(float(np.max(np.abs(trace_s.real))),
                               BOUNDARY_TOL if variant == "plus" else np.inf),
        "boundary_im_s": _cert(float(np.max(np.abs(trace_s.imag))),
                               BOUNDARY_TOL if variant == "minus" else np.inf),
        "holomorphy": _cert(float(np.max(F.negative_mode_fraction(), initial=0.0)), threshold),
    }
    w_min = float(np.min(np.abs(w.synthesize())))
    if w_min > 0:
        certificates["nonvanishing"] = _cert(0.0 if np.min(np.abs(F.synthesize())) > 0 else 1.0, 0.5)
    if variant == "plus" and F.trace is not None and w.trace is not None:
        gap = np.max(np.abs(np.abs(F.trace_samples()) - np.abs(w.trace_samples())))
        certificates["modulus_on_circle"] = _cert(float(gap) / max(w.sup_norm(), 1e-300), 1e-6)

    result = Factorization(s, F, r, variant, certificates)
    for name, cert in certificates.items():
        logger.certificate(f"factorize/{variant}/{name}", cert["measured"], cert["threshold"], cert["passed"])
    return result


def manufactured_fixed_point(F0: DiskField, alpha: AlphaField, variant: str = "plus",
                             tol: float = 1e-13, max_iter: int = 100) -> Tuple[DiskField, int]:
    """
    Iterate w <- exp(s(w)) F0 to a fixed point; then w solves dbar w = alpha conj(w)
    and factorize(w) recovers F0. Converges for small ||alpha||.

    Returns:
        (w, iterations)
    """
    w = F0
    for iteration in range(1, max_iter + 1):
        s = compute_s(compute_r(w, alpha), variant)
        nxt = DiskField.combine(lambda s_, f_: np.exp(s_) * f_, s, F0, padded=True)
        change = float(np.max(np.abs(nxt.profiles - w.profiles)))
        w = nxt
        logger.solve_progress("factor/fixed_point", iteration, change)
        if change <= tol * max(float(np.max(np.abs(w.profiles))), 1e-300):
            return w, iteration
    logger.warning(f"manufactured_fixed_point: no convergence after {max_iter} iterations")
    return w, max_iter
