"""
Brute-force quadrature of the area operators, for cross-checking the fast
mode-wise implementation on small grids.
"""

import numpy as np

from config.settings import settings
from ..grid.fields import DiskField
from ..utils.errors import GridError
from ..utils.logger import get_logger
from .area import _variant_sign

logger = get_logger(__name__, settings.LOG_LEVEL)


def singular_cell_bound(w: DiskField) -> float:
    """Bound on the omitted singular-cell contribution: cell diameter times sup |w| / pi."""
    area = w.rule.weights * (2 * np.pi / w.grid.n_theta)
    return float(np.sqrt(np.max(area)) * np.max(np.abs(w.synthesize())) / np.pi)


def oracle_dense(w: DiskField, which: str = "T", variant: str = "+") -> DiskField:
    """
    Direct tensor quadrature of the defining integral at every grid node.

    For "T" the singular cell (source == target) is omitted; its contribution is
    bounded by singular_cell_bound(w).

    Args:
        w: input field (r for which="reflect")
        which: "T" or "reflect"
        variant: sign variant for "reflect"

    Raises:
        GridError: If the grid exceeds ORACLE_MAX_N_THETA / ORACLE_MAX_N_RADIAL
    """
    grid, rule = w.grid, w.rule
    if grid.n_theta > settings.ORACLE_MAX_N_THETA or rule.n_radial > settings.ORACLE_MAX_N_RADIAL:
        raise GridError(
            f"grid too large for the dense oracle: n_theta={grid.n_theta}, n_radial={rule.n_radial} "
            f"(limits {settings.ORACLE_MAX_N_THETA}, {settings.ORACLE_MAX_N_RADIAL})"
        )

    z = (rule.nodes[:, None] * grid.points[None, :]).ravel()
    values = w.synthesize().ravel()
    area = (rule.weights[:, None] * np.full(grid.n_theta, 2 * np.pi / grid.n_theta)[None, :]).ravel()

    if which == "T":
        diff = z[None, :] - z[:, None]  # source minus target
        singular = diff == 0
        diff[singular] = 1.0
        kernel = np.where(singular, 0.0, 1.0 / diff)
        result = -(kernel @ (values * area)) / np.pi
        logger.debug(f"oracle_dense: omitted singular cells, bound ~ {singular_cell_bound(w):.2e}")
    elif which == "reflect":
        sign = _variant_sign(variant)
        kernel = z[:, None] / (1.0 - np.conj(z)[None, :] * z[:, None])
        result = -sign * (kernel @ (np.conj(values) * area)) / np.pi
    else:
        raise ValueError(f"which must be 'T' or 'reflect', got {which!r}")

    return DiskField.analyze(result.reshape(rule.n_radial, grid.n_theta), grid, rule)
