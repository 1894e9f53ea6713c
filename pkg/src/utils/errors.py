"""
Exception hierarchy for Beltrami Lab.
The CLI maps these onto process exit codes.
"""

from typing import Optional


class BeltramiLabError(Exception):
    """Base class for all lab errors."""


class ConfigurationError(BeltramiLabError, ValueError):
    """Invalid configuration, missing input file or malformed expression."""


class GridError(BeltramiLabError, ValueError):
    """Array shape or radius not representable on the discretization."""


class TraceError(BeltramiLabError):
    """Boundary trace unavailable or extrapolation diverged."""


class ConvergenceError(BeltramiLabError):
    """Iterative solve did not reach its tolerance."""

    def __init__(self, message: str, residual: Optional[float] = None, iterations: Optional[int] = None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class CompatibilityError(BeltramiLabError):
    """Neumann data violates the compatibility condition on the weighted mean."""

    def __init__(self, message: str, weighted_mean: float):
        super().__init__(message)
        self.weighted_mean = weighted_mean
