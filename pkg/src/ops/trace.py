"""
Boundary traces of disk fields.
"""

from typing import Optional

from config.settings import settings
from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..utils.errors import TraceError

TRACE_KINDS = ("cauchy_image", "smooth")


def trace_at_boundary(field: DiskField, kind: str = "cauchy_image",
                      n_nodes: Optional[int] = None,
                      growth_bound: Optional[float] = None) -> BoundarySpectrum:
    """
    Boundary spectrum of a field.

    Args:
        field: disk field
        kind: "cauchy_image" reads the exact r = 1 formulas carried by fields built
            from cauchy_boundary / cauchy_area / reflect_area (and combinations);
            "smooth" extrapolates the radial profiles through the outermost nodes
        n_nodes: extrapolation stencil (default TRACE_EXTRAPOLATION_NODES)
        growth_bound: divergence bound (default TRACE_GROWTH_BOUND)

    Raises:
        TraceError: If no exact trace is carried or extrapolation diverges
    """
    if kind == "cauchy_image":
        if field.trace is None:
            raise TraceError("field was not produced by an operator with an exact boundary formula")
        return BoundarySpectrum(field.trace, field.grid)
    if kind == "smooth":
        coeffs = field.extrapolated_trace(
            n_nodes or settings.TRACE_EXTRAPOLATION_NODES,
            growth_bound or settings.TRACE_GROWTH_BOUND,
        )
        return BoundarySpectrum(coeffs, field.grid)
    raise ValueError(f"kind must be one of {TRACE_KINDS}, got {kind!r}")


def best_trace(field: DiskField) -> BoundarySpectrum:
    """Exact trace when carried, extrapolated otherwise."""
    kind = "cauchy_image" if field.has_trace else "smooth"
    return trace_at_boundary(field, kind)
