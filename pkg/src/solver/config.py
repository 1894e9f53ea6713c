"""
Solver configuration.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import Settings, settings
from ..utils.logger import get_logger

logger = get_logger(__name__, settings.LOG_LEVEL)


class SolveConfig(BaseModel):
    """
    Tolerances and iteration limits shared by every solve.

    The inner tolerance governs the Fredholm solve, the outer one the
    boundary-matching Krylov loop wrapped around it.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    p: float = Field(default=2.0, description="Exponent in (1, inf)")
    inner_tol: float = Field(default=1e-10, gt=0)
    outer_tol: float = Field(default=1e-8, gt=0)
    max_iter: int = Field(default=200, ge=1)
    restart: int = Field(default=40, ge=1, description="Krylov restart length")
    contraction_limit: float = Field(default=0.9, gt=0, lt=1)
    power_iterations: int = Field(default=6, ge=1)
    holomorphy_threshold: float = Field(default=1e-6, gt=0)
    trace_nodes: int = Field(default=4, ge=2)

    @field_validator("p")
    @classmethod
    def _check_p(cls, v: float) -> float:
        if not 1.0 < v < float("inf"):
            raise ValueError(f"p must lie in (1, inf), got {v}")
        return v

    @model_validator(mode="after")
    def _check_tolerance_split(self):
        if self.outer_tol < 10 * self.inner_tol:
            logger.warning(
                f"outer_tol={self.outer_tol:.1e} is below 10 x inner_tol={self.inner_tol:.1e}; "
                "inner noise may stall the outer iteration"
            )
        return self

    @property
    def q(self) -> float:
        """Conjugate exponent p/(p-1)."""
        return self.p / (self.p - 1.0)

    @classmethod
    def from_settings(cls, config: Settings = settings, **overrides) -> "SolveConfig":
        values = dict(
            p=config.P,
            inner_tol=config.INNER_TOL,
            outer_tol=config.OUTER_TOL,
            max_iter=config.MAX_ITER,
            restart=config.KRYLOV_RESTART,
            contraction_limit=config.PICARD_CONTRACTION_LIMIT,
            power_iterations=config.POWER_ITERATIONS,
            holomorphy_threshold=config.HOLOMORPHY_THRESHOLD,
            trace_nodes=config.TRACE_EXTRAPOLATION_NODES,
        )
        values.update(overrides)
        return cls(**values)
