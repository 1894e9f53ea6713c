"""
SolveReport: residuals, iteration counts, norms and certificates of a solve.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np


def plain_value(value: Any) -> Any:
    """numpy scalars and arrays to JSON-friendly python values."""
    if isinstance(value, dict):
        return {str(k): plain_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain_value(value.tolist())
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return {"re": value.real, "im": value.imag}
    return value


@dataclass
class StageRecord:
    method: str
    iterations: int
    residual: float
    converged: bool = True


@dataclass
class SolveReport:
    """
    Attached to every solver output. Residuals are recomputed from the
    returned fields before being recorded.

    Attributes:
        stages: per-stage method, iteration count and final residual
        norms: named norms of inputs and outputs
        certificates: named inequality checks {measured, threshold, passed}
        diagnostics: free-form measured quantities
        warnings: accuracy caveats raised during the solve
        oracle: optional comparison block against an independent oracle
    """

    stages: Dict[str, StageRecord] = field(default_factory=dict)
    norms: Dict[str, float] = field(default_factory=dict)
    certificates: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)
    oracle: Optional[Dict[str, Any]] = None

    def record_stage(self, stage: str, method: str, iterations: int, residual: float,
                     converged: bool = True):
        self.stages[stage] = StageRecord(method, int(iterations), float(residual), bool(converged))

    def add_norm(self, name: str, value: float):
        self.norms[name] = float(value)

    def add_certificate(self, name: str, measured: float, threshold: float,
                        passed: Optional[bool] = None) -> bool:
        if passed is None:
            passed = bool(measured <= threshold)
        self.certificates[name] = {"measured": float(measured), "threshold": float(threshold),
                                   "passed": bool(passed)}
        return bool(passed)

    def merge(self, other: "SolveReport", prefix: str = "") -> "SolveReport":
        """Fold another report in, prefixing its keys."""
        tag = f"{prefix}." if prefix else ""
        for key, record in other.stages.items():
            self.stages[tag + key] = record
        for key, value in other.norms.items():
            self.norms[tag + key] = value
        for key, value in other.certificates.items():
            self.certificates[tag + key] = value
        for key, value in other.diagnostics.items():
            self.diagnostics[tag + key] = value
        self.warnings.extend(other.warnings)
        if other.oracle is not None and self.oracle is None:
            self.oracle = other.oracle
        return self

    @property
    def residual(self) -> float:
        """Largest recorded stage residual."""
        return max((s.residual for s in self.stages.values()), default=0.0)

    @property
    def all_passed(self) -> bool:
        return all(c["passed"] for c in self.certificates.values())

    def to_dict(self) -> Dict[str, Any]:
        return plain_value({
            "stages": {k: vars(v) for k, v in self.stages.items()},
            "norms": self.norms,
            "certificates": self.certificates,
            "diagnostics": self.diagnostics,
            "warnings": list(self.warnings),
            "oracle": self.oracle,
        })
