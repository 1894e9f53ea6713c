"""
File formats of the command line.

CSV tables are written by pandas with a header line, '.' decimals, LF line
endings and 17 significant digits; reports are orjson documents with sorted keys.
"""

from pathlib import Path
from typing import Any, Union

import numpy as np
import orjson
import pandas as pd

from ..grid.circle import BoundarySpectrum, CircleGrid
from ..grid.fields import DiskField
from ..grid.radial import RadialRule
from ..solver.report import plain_value
from ..utils.errors import ConfigurationError

FLOAT_FORMAT = "%.16e"
PathLike = Union[str, Path]


def write_table(table: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def field_table(field: DiskField, include_trace: bool = True) -> pd.DataFrame:
    """Rows (r, theta, re, im) on the tensor grid, then r = 1 when a trace is carried."""
    grid, rule = field.grid, field.rule
    values = field.synthesize()
    radii = np.repeat(rule.nodes, grid.n_theta)
    if include_trace and field.has_trace:
        values = np.vstack([values, field.trace_samples()[None, :]])
        radii = np.concatenate([radii, np.ones(grid.n_theta)])
    theta = np.tile(grid.theta, values.shape[0])
    values = values.ravel()
    return pd.DataFrame({"r": radii, "theta": theta, "re": values.real, "im": values.imag})


def trace_table(trace: BoundarySpectrum) -> pd.DataFrame:
    values = trace.grid.ifft_modes(trace.coeffs)
    return pd.DataFrame({"theta": trace.grid.theta, "re": values.real, "im": values.imag})


def write_field_csv(field: DiskField, path: PathLike) -> Path:
    return write_table(field_table(field), path)


def write_trace_csv(trace: BoundarySpectrum, path: PathLike) -> Path:
    return write_table(trace_table(trace), path)


def _default(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    plain = plain_value(value)
    if plain is value:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return plain


def dumps_report(data: Any) -> bytes:
    return orjson.dumps(plain_value(data), default=_default,
                        option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY)


def write_report_json(data: Any, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_report(data) + b"\n")
    return path


# ==================== READERS ====================

def _read_csv(path: PathLike) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except FileNotFoundError as e:
        raise ConfigurationError(f"input file not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigurationError(f"cannot read {path}: {e}") from e


def read_boundary_csv(path: PathLike, grid: CircleGrid) -> BoundarySpectrum:
    """
    Boundary samples at the grid angles: columns (theta, value) for real data
    or (theta, re, im) for complex data.

    Raises:
        ConfigurationError: If the file is missing or does not match the grid
    """
    table = _read_csv(path)
    if len(table) != grid.n_theta:
        raise ConfigurationError(f"{path}: {len(table)} rows, expected n_theta = {grid.n_theta}")
    if "theta" in table and not np.allclose(table["theta"].to_numpy(), grid.theta, atol=1e-12):
        raise ConfigurationError(f"{path}: theta column does not match the equispaced grid")
    if "value" in table:
        return BoundarySpectrum.from_samples(table["value"].to_numpy(dtype=float), grid, real=True)
    if {"re", "im"} <= set(table.columns):
        values = table["re"].to_numpy(dtype=float) + 1j * table["im"].to_numpy(dtype=float)
        return BoundarySpectrum.from_samples(values, grid, real=False)
    raise ConfigurationError(f"{path}: expected a 'value' column or 're'/'im' columns")


def read_field_csv(path: PathLike, grid: CircleGrid, rule: RadialRule) -> DiskField:
    """
    Inverse of write_field_csv: rows on the radial nodes (in order) and
    optionally r = 1 for the trace.

    Raises:
        ConfigurationError: If the rows do not match the grid
    """
    table = _read_csv(path)
    missing = {"r", "theta", "re", "im"} - set(table.columns)
    if missing:
        raise ConfigurationError(f"{path}: missing columns {sorted(missing)}")
    values = (table["re"].to_numpy(dtype=float) + 1j * table["im"].to_numpy(dtype=float))
    radii = table["r"].to_numpy(dtype=float)
    n_rows = len(table) // grid.n_theta
    if n_rows * grid.n_theta != len(table) or n_rows not in (rule.n_radial, rule.n_radial + 1):
        raise ConfigurationError(f"{path}: {len(table)} rows do not fit the {rule.n_radial} x {grid.n_theta} grid")
    values = values.reshape(n_rows, grid.n_theta)
    radii = radii.reshape(n_rows, grid.n_theta)[:, 0]
    if not np.allclose(radii[: rule.n_radial], rule.nodes, atol=1e-12):
        raise ConfigurationError(f"{path}: radii do not match the radial rule")
    trace = values[rule.n_radial] if n_rows > rule.n_radial else None
    return DiskField.analyze(values[: rule.n_radial], grid, rule, trace)
