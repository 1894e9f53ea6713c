"""
Circle discretization: equispaced angles and truncated Fourier spectra.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, Optional, Union

import numpy as np

from ..utils.validator import InputValidator

Scalar = Union[int, float, complex]


@dataclass(frozen=True)
class CircleGrid:
    """
    Equispaced angles theta_k = 2*pi*k/n_theta.

    Spectra keep the modes n = -M..M with M = n_theta/2 - 1; the Nyquist
    mode is dropped so that real samples give conjugate-symmetric spectra.
    """

    n_theta: int = 256

    def __post_init__(self):
        InputValidator.validate_power_of_two(self.n_theta, "n_theta", minimum=16)

    @property
    def M(self) -> int:
        return self.n_theta // 2 - 1

    @property
    def n_modes(self) -> int:
        return 2 * self.M + 1

    @cached_property
    def modes(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @cached_property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_theta) / self.n_theta

    @cached_property
    def points(self) -> np.ndarray:
        """Boundary points e^{i theta_k}."""
        return np.exp(1j * self.theta)

    def index(self, n: int) -> int:
        """Array position of mode n."""
        if abs(n) > self.M:
            raise IndexError(f"mode {n} outside -{self.M}..{self.M}")
        return n + self.M

    def fft_modes(self, samples: np.ndarray, n_fft: Optional[int] = None) -> np.ndarray:
        """Fourier coefficients of samples along the last axis, truncated to -M..M."""
        n_fft = n_fft or self.n_theta
        spectrum = np.fft.fft(samples, axis=-1) / n_fft
        return spectrum[..., self.modes % n_fft]

    def ifft_modes(self, coeffs: np.ndarray, n_fft: Optional[int] = None) -> np.ndarray:
        """Samples on n_fft equispaced angles of the truncated series along the last axis."""
        n_fft = n_fft or self.n_theta
        full = np.zeros(coeffs.shape[:-1] + (n_fft,), dtype=complex)
        full[..., self.modes % n_fft] = coeffs
        return np.fft.ifft(full, axis=-1) * n_fft


@dataclass(frozen=True, eq=False)
class BoundarySpectrum:
    """
    Truncated Fourier series of a function on the unit circle.

    Attributes:
        coeffs: complex coefficients indexed n = -M..M
        grid: the circle grid
        is_real_valued: coeff(-n) == conj(coeff(n)) for all n
    """

    coeffs: np.ndarray
    grid: CircleGrid
    is_real_valued: bool = False

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (self.grid.n_modes,):
            raise ValueError(f"coeffs has shape {coeffs.shape}, expected ({self.grid.n_modes},)")
        if self.is_real_valued:
            mirrored = np.conj(coeffs[::-1])
            scale = max(float(np.max(np.abs(coeffs))), 1e-300)
            if np.max(np.abs(coeffs - mirrored)) > 1e-12 * scale:
                raise ValueError("spectrum flagged real-valued is not conjugate-symmetric")
            coeffs = 0.5 * (coeffs + mirrored)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    # ==================== CONSTRUCTORS ====================

    @classmethod
    def from_samples(cls, values: np.ndarray, grid: CircleGrid, real: Optional[bool] = None) -> "BoundarySpectrum":
        """
        Analyze samples at the grid angles.

        Args:
            values: samples of length n_theta
            grid: circle grid
            real: force the real flag; inferred from the dtype when None
        """
        values = InputValidator.validate_shape(values, (grid.n_theta,), "boundary samples")
        if real is None:
            real = not np.iscomplexobj(values)
        if real:
            values = InputValidator.validate_real_samples(values, "boundary samples")
        return cls(grid.fft_modes(values), grid, bool(real))

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], grid: CircleGrid,
                      real: Optional[bool] = None) -> "BoundarySpectrum":
        """Sample func(theta) on the grid."""
        values = np.asarray(func(grid.theta))
        if values.ndim == 0:
            values = np.full(grid.n_theta, values)
        return cls.from_samples(values, grid, real)

    @classmethod
    def from_modes(cls, modes: Dict[int, Scalar], grid: CircleGrid, real: bool = False) -> "BoundarySpectrum":
        """Build from a sparse {n: coefficient} mapping."""
        coeffs = np.zeros(grid.n_modes, dtype=complex)
        for n, c in modes.items():
            coeffs[grid.index(n)] = c
        return cls(coeffs, grid, real)

    @classmethod
    def zeros(cls, grid: CircleGrid, real: bool = True) -> "BoundarySpectrum":
        return cls(np.zeros(grid.n_modes, dtype=complex), grid, real)

    @classmethod
    def random_real(cls, grid: CircleGrid, rng: np.random.Generator, degree: int = 8,
                    decay: float = 1.0) -> "BoundarySpectrum":
        """Random real trigonometric polynomial with algebraically decaying coefficients."""
        degree = min(degree, grid.M)
        coeffs = np.zeros(grid.n_modes, dtype=complex)
        for n in range(1, degree + 1):
            c = (rng.standard_normal() + 1j * rng.standard_normal()) / n ** decay
            coeffs[grid.index(n)] = c
            coeffs[grid.index(-n)] = np.conj(c)
        coeffs[grid.index(0)] = rng.standard_normal()
        return cls(coeffs, grid, True)

    # ==================== ACCESS ====================

    def coeff(self, n: int) -> complex:
        return complex(self.coeffs[self.grid.index(n)])

    def resample(self, grid: CircleGrid) -> "BoundarySpectrum":
        """Same series on another grid: shared modes copied, the rest zero (or dropped)."""
        coeffs = np.zeros(grid.n_modes, dtype=complex)
        keep = min(grid.M, self.grid.M)
        coeffs[grid.M - keep: grid.M + keep + 1] = self.coeffs[self.grid.M - keep: self.grid.M + keep + 1]
        return BoundarySpectrum(coeffs, grid, self.is_real_valued)

    def samples(self) -> np.ndarray:
        """Values at the grid angles (real array when real-valued)."""
        values = self.grid.ifft_modes(self.coeffs)
        return values.real if self.is_real_valued else values

    def mean(self) -> complex:
        """(1/2pi) times the integral over the circle."""
        value = self.coeff(0)
        return value.real if self.is_real_valued else value

    # ==================== ALGEBRA ====================

    def conj(self) -> "BoundarySpectrum":
        return BoundarySpectrum(np.conj(self.coeffs[::-1]), self.grid, self.is_real_valued)

    def real_part(self) -> "BoundarySpectrum":
        return BoundarySpectrum(0.5 * (self.coeffs + np.conj(self.coeffs[::-1])), self.grid, True)

    def imag_part(self) -> "BoundarySpectrum":
        return BoundarySpectrum((self.coeffs - np.conj(self.coeffs[::-1])) / 2j, self.grid, True)

    def derivative(self) -> "BoundarySpectrum":
        """Exact theta-derivative."""
        return BoundarySpectrum(1j * self.grid.modes * self.coeffs, self.grid, self.is_real_valued)

    def antiderivative(self) -> "BoundarySpectrum":
        """Zero-mean antiderivative in theta; the mean of self is ignored."""
        modes = self.grid.modes
        out = np.zeros_like(self.coeffs)
        nonzero = modes != 0
        out[nonzero] = self.coeffs[nonzero] / (1j * modes[nonzero])
        return BoundarySpectrum(out, self.grid, self.is_real_valued)

    def multiply(self, other: "BoundarySpectrum") -> "BoundarySpectrum":
        """Pointwise product, dealiased by zero padding."""
        n_pad = 2 * self.grid.n_theta
        values = self.grid.ifft_modes(self.coeffs, n_pad) * self.grid.ifft_modes(other.coeffs, n_pad)
        return BoundarySpectrum(self.grid.fft_modes(values, n_pad), self.grid,
                                self.is_real_valued and other.is_real_valued)

    def map_samples(self, func: Callable[[np.ndarray], np.ndarray], real: Optional[bool] = None) -> "BoundarySpectrum":
        """Apply an elementwise function to the samples and re-analyze."""
        return BoundarySpectrum.from_samples(np.asarray(func(self.samples())), self.grid, real)

    def _check(self, other: "BoundarySpectrum"):
        if other.grid != self.grid:
            raise ValueError("spectra live on different grids")

    def __add__(self, other: "BoundarySpectrum") -> "BoundarySpectrum":
        self._check(other)
        return BoundarySpectrum(self.coeffs + other.coeffs, self.grid,
                                self.is_real_valued and other.is_real_valued)

    def __sub__(self, other: "BoundarySpectrum") -> "BoundarySpectrum":
        self._check(other)
        return BoundarySpectrum(self.coeffs - other.coeffs, self.grid,
                                self.is_real_valued and other.is_real_valued)

    def __neg__(self) -> "BoundarySpectrum":
        return BoundarySpectrum(-self.coeffs, self.grid, self.is_real_valued)

    def __mul__(self, scalar: Scalar) -> "BoundarySpectrum":
        if isinstance(scalar, BoundarySpectrum):
            return self.multiply(scalar)
        real = self.is_real_valued and np.isreal(scalar)
        return BoundarySpectrum(self.coeffs * scalar, self.grid, bool(real))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"BoundarySpectrum(n_theta={self.grid.n_theta}, real={self.is_real_valued})"
