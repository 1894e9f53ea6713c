"""
Run configuration: one JSON document describing a command's inputs.

Every section is a pydantic model, so a RunConfig survives
serialize -> parse unchanged.
"""

import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import settings
from ..coeff.coefficient import Coefficient, nu_from_sigma
from ..coeff.expressions import ComplexExpression, boundary_function
from ..domains.conformal import ConformalMap, map_from_spec
from ..grid.circle import BoundarySpectrum, CircleGrid
from ..grid.radial import RadialRule
from ..solver.config import SolveConfig
from ..utils.errors import ConfigurationError
from .io import read_boundary_csv


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class GridSpec(_Section):
    n_theta: int = Field(default_factory=lambda: settings.N_THETA)
    radial_panels: int = Field(default_factory=lambda: settings.RADIAL_PANELS, ge=1)
    nodes_per_panel: int = Field(default_factory=lambda: settings.NODES_PER_PANEL, ge=2)

    @field_validator("n_theta")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v < 16 or v & (v - 1):
            raise ValueError(f"n_theta must be a power of two >= 16, got {v}")
        return v

    def build(self) -> Tuple[CircleGrid, RadialRule]:
        return CircleGrid(self.n_theta), RadialRule(self.radial_panels, self.nodes_per_panel)


class CoefficientSpec(_Section):
    """
    kind:
        zero        nu = 0
        constant    value is nu (of="nu") or sigma (of="sigma")
        expression  closed form in x, y, r, theta for nu or sigma
        radial      sigma(r) given as an expression in r
    """

    kind: Literal["zero", "constant", "expression", "radial"] = "zero"
    of: Literal["nu", "sigma"] = "nu"
    value: float = 0.0
    expression: Optional[str] = None

    @model_validator(mode="after")
    def _needs_expression(self):
        if self.kind in ("expression", "radial") and not self.expression:
            raise ValueError(f"coefficient kind {self.kind!r} needs an expression")
        return self

    def build(self, grid: CircleGrid, rule: RadialRule) -> Coefficient:
        try:
            if self.kind == "zero":
                return Coefficient.constant(0.0, grid, rule)
            if self.kind == "constant":
                if self.of == "sigma":
                    return Coefficient.constant_sigma(self.value, grid, rule)
                return Coefficient.constant(self.value, grid, rule)
            if self.kind == "radial":
                return Coefficient.radial(self.expression, grid, rule)
            return Coefficient.from_expression(self.expression, grid, rule, of=self.of)
        except ConfigurationError:
            raise
        except ValueError as e:
            raise ConfigurationError(f"invalid coefficient: {e}") from e

    def nu_on_omega(self) -> str:
        """
        Dilatation as an expression in x, y on a mapped domain.

        Raises:
            ConfigurationError: For radial conductivities and sigma expressions
        """
        if self.kind == "zero":
            return "0"
        if self.kind == "constant":
            nu = self.value if self.of == "nu" else nu_from_sigma(self.value)
            return repr(float(nu))
        if self.kind == "expression" and self.of == "nu":
            return self.expression
        raise ConfigurationError("a mapped domain takes nu as zero, a constant or an expression with of=\"nu\"")


class DataSpec(_Section):
    """Boundary data: an expression in x, y, r, theta evaluated on the circle, or a CSV file."""

    expression: Optional[str] = "cos(theta)"
    csv: Optional[Path] = None

    def build(self, grid: CircleGrid) -> BoundarySpectrum:
        if self.csv is not None:
            return read_boundary_csv(self.csv, grid)
        if not self.expression:
            raise ConfigurationError("boundary data needs an expression or a csv path")
        return BoundarySpectrum.from_function(boundary_function(self.expression), grid, real=True)

    def on_omega(self) -> str:
        """Data expression in x, y on a mapped domain."""
        if self.csv is not None or not self.expression:
            raise ConfigurationError("a mapped domain takes boundary data as an expression")
        return self.expression


class MapSpec(_Section):
    kind: Literal["identity", "affine", "quadratic", "expression"] = "identity"
    a: Tuple[float, float] = (1.0, 0.0)
    b: Tuple[float, float] = (0.0, 0.0)
    eps: float = 0.3
    expression: Optional[str] = None

    def build(self) -> ConformalMap:
        spec = self.model_dump(exclude_none=True)
        return map_from_spec(spec)


class DensitySpec(_Section):
    arcs: List[Tuple[float, float]] = Field(default_factory=lambda: [(0.0, math.pi)])
    target: str = "1/z"
    schedule: List[int] = Field(default_factory=lambda: [4, 8, 16, 32])
    sobolev: bool = False

    def target_samples(self, grid: CircleGrid) -> np.ndarray:
        """Target as a function of z on the unit circle."""
        return ComplexExpression.parse(self.target).function()(grid.points)


class OpSpec(_Section):
    name: Literal["cauchy_boundary", "analytic_projection", "conjugation_h0", "hilbert_nu",
                  "cauchy_area", "beurling", "reflect_area"] = "analytic_projection"
    input: Optional[Path] = None
    variant: Literal["+", "-"] = "+"


class RunConfig(_Section):
    grid: GridSpec = Field(default_factory=GridSpec)
    solver: SolveConfig = Field(default_factory=SolveConfig.from_settings)
    coefficient: CoefficientSpec = Field(default_factory=CoefficientSpec)
    data: DataSpec = Field(default_factory=DataSpec)
    map: MapSpec = Field(default_factory=MapSpec)
    density: DensitySpec = Field(default_factory=DensitySpec)
    op: OpSpec = Field(default_factory=OpSpec)
    variant: Literal["plus", "minus"] = "plus"
    oracle: bool = False
    output_dir: Path = Field(default_factory=lambda: settings.OUTPUT_DIR)
    seed: int = Field(default_factory=lambda: settings.SEED)
    threads: int = Field(default_factory=lambda: settings.THREADS, ge=1)

    # ==================== SERIALIZATION ====================

    def to_json(self) -> bytes:
        return orjson.dumps(self.model_dump(mode="json"), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)

    @classmethod
    def from_json(cls, payload: bytes) -> "RunConfig":
        return cls.model_validate(orjson.loads(payload))

    @classmethod
    def load(cls, path: Optional[Path] = None, overrides: Iterable[str] = ()) -> "RunConfig":
        """
        Read a JSON config (or start from defaults) and apply key=value overrides.

        Raises:
            ConfigurationError: If the file is missing or not valid JSON, or an
                override is malformed
            pydantic.ValidationError: If a value fails validation
        """
        data: Dict[str, Any] = {}
        if path is not None:
            try:
                data = orjson.loads(Path(path).read_bytes())
            except FileNotFoundError as e:
                raise ConfigurationError(f"config file not found: {path}") from e
            except orjson.JSONDecodeError as e:
                raise ConfigurationError(f"config file {path} is not valid JSON: {e}") from e
            if not isinstance(data, dict):
                raise ConfigurationError(f"config file {path} must contain a JSON object")
        for item in overrides:
            apply_override(data, item)
        return cls.model_validate(data)

    def build_grid(self) -> Tuple[CircleGrid, RadialRule]:
        return self.grid.build()


def _parse_value(text: str) -> Any:
    try:
        return orjson.loads(text)
    except orjson.JSONDecodeError:
        return text


def apply_override(data: Dict[str, Any], item: str) -> Dict[str, Any]:
    """Set a dotted key from "a.b.c=value"; the value is parsed as JSON when possible."""
    if "=" not in item:
        raise ConfigurationError(f"override {item!r} is not of the form key=value")
    key, text = item.split("=", 1)
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigurationError(f"override {item!r} has an empty key")
    node = data
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"override {item!r}: {part!r} is not a section")
        node = child
    node[parts[-1]] = _parse_value(text.strip())
    return data
