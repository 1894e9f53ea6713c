"""
Input Validation Module
Guards numerical inputs before they reach the solvers.
"""

import math
from typing import Any

import numpy as np


class InputValidator:
    """
    Static validators for grid sizes, exponents, tolerances and arrays.
    """

    @staticmethod
    def validate_power_of_two(value: Any, name: str = "n_theta", minimum: int = 16) -> int:
        """
        Validate a grid size.

        Args:
            value: Value to validate
            name: Parameter name for error messages
            minimum: Smallest allowed value

        Returns:
            Validated size as integer

        Raises:
            ValueError: If not a power of two or below the minimum
        """
        try:
            n = int(value)
        except (TypeError, ValueError):
            raise ValueError(f"Invalid {name}: {value}")

        if n != value or n < minimum or n & (n - 1):
            raise ValueError(f"{name} must be a power of two >= {minimum}, got {value}")

        return n

    @staticmethod
    def validate_exponent(p: Any) -> float:
        """
        Validate a Lebesgue exponent.

        Args:
            p: Exponent to validate

        Returns:
            Validated exponent

        Raises:
            ValueError: If p is not in (1, inf)
        """
        try:
            p_float = float(p)
        except (TypeError, ValueError):
            raise ValueError(f"Invalid exponent: {p}")

        if not (1.0 < p_float < math.inf):
            raise ValueError(f"Exponent must lie in (1, inf), got {p}")

        return p_float

    @staticmethod
    def validate_positive(value: Any, name: str) -> float:
        """Validate a strictly positive finite number."""
        try:
            v = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"Invalid {name}: {value}")

        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be positive, got {value}")

        return v

    @staticmethod
    def validate_open_interval(value: Any, low: float, high: float, name: str) -> float:
        """Validate value in the open interval (low, high)."""
        try:
            v = float(value)
        except (TypeError, ValueError):
            raise ValueError(f"Invalid {name}: {value}")

        if not (low < v < high):
            raise ValueError(f"{name} must lie in ({low}, {high}), got {value}")

        return v

    @staticmethod
    def validate_shape(array: np.ndarray, shape: tuple, name: str = "samples") -> np.ndarray:
        """
        Validate an array shape.

        Raises:
            ValueError: If the shape does not match
        """
        array = np.asarray(array)
        if array.shape != tuple(shape):
            raise ValueError(f"{name} has shape {array.shape}, expected {tuple(shape)}")
        return array

    @staticmethod
    def validate_real_samples(values: np.ndarray, name: str = "values", rtol: float = 1e-12) -> np.ndarray:
        """
        Validate that samples are real up to rounding and return the real part.

        Raises:
            ValueError: If the imaginary part is not negligible
        """
        values = np.asarray(values)
        if np.iscomplexobj(values):
            scale = max(float(np.max(np.abs(values), initial=0.0)), 1.0)
            if np.max(np.abs(values.imag), initial=0.0) > rtol * scale:
                raise ValueError(f"{name} must be real-valued")
            values = values.real
        return values.astype(float)
