"""
DiskField: mode-wise radial profiles on the polar grid.

A field is stored as profiles[n + M, j] = f_n(r_j) where
f(r e^{i theta}) = sum_n f_n(r) e^{i n theta}. Fields produced by analytic
formulas also carry their boundary spectrum at r = 1 (`trace`), which
the exact trace machinery reads without extrapolation.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .circle import BoundarySpectrum, CircleGrid
from .radial import RadialRule
from ..utils.errors import GridError, TraceError
from ..utils.validator import InputValidator

Scalar = Union[int, float, complex]

# 3/2 zero padding in theta keeps products of band-limited fields alias-free
PADDING_FACTOR = 3 / 2


@dataclass(frozen=True, eq=False)
class DiskField:
    """
    Complex field on the unit disk in mode/radial-node form.

    Attributes:
        profiles: complex array (n_modes, n_radial)
        grid: circle grid
        rule: radial rule
        trace: optional boundary coefficients at r = 1, shape (n_modes,)
    """

    profiles: np.ndarray
    grid: CircleGrid
    rule: RadialRule
    trace: Optional[np.ndarray] = None

    def __post_init__(self):
        profiles = np.array(self.profiles, dtype=complex)
        expected = (self.grid.n_modes, self.rule.n_radial)
        if profiles.shape != expected:
            raise GridError(f"profiles have shape {profiles.shape}, expected {expected}")
        profiles.setflags(write=False)
        object.__setattr__(self, "profiles", profiles)
        if self.trace is not None:
            trace = np.array(self.trace, dtype=complex)
            if trace.shape != (self.grid.n_modes,):
                raise GridError(f"trace has shape {trace.shape}, expected ({self.grid.n_modes},)")
            trace.setflags(write=False)
            object.__setattr__(self, "trace", trace)

    # ==================== CONSTRUCTORS ====================

    @classmethod
    def zeros(cls, grid: CircleGrid, rule: RadialRule) -> "DiskField":
        return cls(np.zeros((grid.n_modes, rule.n_radial)), grid, rule, np.zeros(grid.n_modes))

    @classmethod
    def analyze(cls, samples: np.ndarray, grid: CircleGrid, rule: RadialRule,
                trace_samples: Optional[np.ndarray] = None) -> "DiskField":
        """
        Per-radius FFT of samples on the tensor grid.

        Args:
            samples: complex array (n_radial, n_theta), row j on the circle r_j
            grid: circle grid
            rule: radial rule
            trace_samples: optional boundary values at r = 1, length n_theta

        Raises:
            GridError: If an array shape does not match the grid
        """
        try:
            samples = InputValidator.validate_shape(samples, (rule.n_radial, grid.n_theta))
            if trace_samples is not None:
                trace_samples = InputValidator.validate_shape(trace_samples, (grid.n_theta,), "trace samples")
        except ValueError as e:
            raise GridError(str(e)) from e
        trace = None if trace_samples is None else grid.fft_modes(trace_samples)
        return cls(grid.fft_modes(samples).T, grid, rule, trace)

    @classmethod
    def from_callable(cls, func: Callable[[np.ndarray], np.ndarray], grid: CircleGrid,
                      rule: RadialRule, with_trace: bool = True) -> "DiskField":
        """Sample func(z) at the grid nodes (and on the unit circle for the trace)."""
        z = rule.nodes[:, None] * grid.points[None, :]
        samples = np.broadcast_to(np.asarray(func(z), dtype=complex), z.shape)
        trace = None
        if with_trace:
            trace = np.broadcast_to(np.asarray(func(grid.points), dtype=complex), grid.points.shape)
        return cls.analyze(samples, grid, rule, trace)

    @classmethod
    def random_polynomial(cls, grid: CircleGrid, rule: RadialRule, rng: np.random.Generator,
                          degree: int = 3) -> "DiskField":
        """
        Random band-limited field sum c_jk z^j conj(z)^k over j + k <= degree,
        with standard complex normal c_jk; it occupies every mode |n| <= degree.
        """
        degree = min(degree, grid.M)
        terms = [(j, k) for j in range(degree + 1) for k in range(degree + 1 - j)]
        c = rng.standard_normal(len(terms)) + 1j * rng.standard_normal(len(terms))

        def func(z):
            zbar = np.conj(z)
            return sum(cjk * z ** j * zbar ** k for cjk, (j, k) in zip(c, terms))

        return cls.from_callable(func, grid, rule)

    @classmethod
    def from_profiles(cls, profiles: dict, grid: CircleGrid, rule: RadialRule,
                      trace: Optional[dict] = None) -> "DiskField":
        """Build from {mode: profile array} (and optionally {mode: boundary value})."""
        data = np.zeros((grid.n_modes, rule.n_radial), dtype=complex)
        for n, values in profiles.items():
            data[grid.index(n)] = values
        boundary = None
        if trace is not None:
            boundary = np.zeros(grid.n_modes, dtype=complex)
            for n, value in trace.items():
                boundary[grid.index(n)] = value
        return cls(data, grid, rule, boundary)

    def with_trace(self, trace: Optional[np.ndarray]) -> "DiskField":
        return DiskField(self.profiles, self.grid, self.rule, trace)

    def like(self, profiles: np.ndarray, trace: Optional[np.ndarray] = None) -> "DiskField":
        return DiskField(profiles, self.grid, self.rule, trace)

    # ==================== SAMPLES ====================

    def synthesize(self) -> np.ndarray:
        """Samples on the tensor grid, shape (n_radial, n_theta)."""
        return self.grid.ifft_modes(self.profiles.T)

    def trace_samples(self) -> Optional[np.ndarray]:
        return None if self.trace is None else self.grid.ifft_modes(self.trace)

    def profile(self, n: int) -> np.ndarray:
        return self.profiles[self.grid.index(n)]

    @property
    def has_trace(self) -> bool:
        return self.trace is not None

    def boundary(self) -> BoundarySpectrum:
        """Carried boundary spectrum."""
        if self.trace is None:
            raise TraceError("field carries no exact boundary trace")
        return BoundarySpectrum(self.trace, self.grid)

    def extrapolated_trace(self, n_nodes: int = 4, growth_bound: float = 1e3) -> np.ndarray:
        """
        Boundary coefficients by polynomial extrapolation of every profile
        through the outermost n_nodes radial nodes.

        Raises:
            TraceError: If the extrapolated values exceed growth_bound times the
                outer profile magnitude (a sign of a non-Hardy field)
        """
        weights = self.rule.extrapolation_weights(n_nodes)
        trace = self.profiles @ weights
        outer = float(np.max(np.abs(self.profiles[:, -n_nodes:]), initial=0.0))
        extrapolated = float(np.max(np.abs(trace), initial=0.0))
        if extrapolated > growth_bound * max(outer, 1e-300) and extrapolated > 0:
            raise TraceError(
                f"trace extrapolation diverged: growth ratio {extrapolated / max(outer, 1e-300):.3e} "
                f"exceeds {growth_bound:.1e}"
            )
        return trace

    def boundary_coeffs(self, n_nodes: int = 4) -> np.ndarray:
        """Carried trace if present, else the extrapolated one."""
        return self.trace if self.trace is not None else self.extrapolated_trace(n_nodes)

    def circle_samples(self, r: float, n_nodes: int = 4) -> np.ndarray:
        """
        Samples on the circle of radius r, which must be a radial node or 1.

        Raises:
            GridError: If r is not representable on the grid
        """
        if abs(r - 1.0) <= 1e-14:
            return self.grid.ifft_modes(self.boundary_coeffs(n_nodes))
        j = self.rule.node_index(r)
        if j is None:
            raise GridError(f"radius {r} is neither a radial node nor 1")
        return self.grid.ifft_modes(self.profiles[:, j])

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """
        Values at arbitrary points of the closed disk (panel-wise radial
        interpolation, exact mode synthesis in angle).
        """
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        radii = np.abs(flat)
        if np.any(radii > 1.0 + 1e-12):
            raise GridError("evaluation points must lie in the closed unit disk")
        E = self.rule.interpolation_matrix(radii)
        values_by_mode = E @ self.profiles.T
        phases = np.exp(1j * np.outer(np.angle(flat), self.grid.modes))
        return np.sum(values_by_mode * phases, axis=1).reshape(z.shape)

    def profiles_at(self, radii: Sequence[float]) -> np.ndarray:
        """Profiles interpolated to arbitrary radii, shape (n_modes, len(radii))."""
        return self.profiles @ self.rule.interpolation_matrix(np.asarray(radii)).T

    # ==================== POINTWISE ALGEBRA ====================

    @staticmethod
    def combine(func: Callable[..., np.ndarray], *fields: "DiskField", padded: bool = False) -> "DiskField":
        """
        Apply an elementwise function to the samples of one or more fields.

        The boundary trace is propagated when every input carries one.
        With padded=True samples are taken on a 3/2-refined angular grid,
        which is alias-free for products of two band-limited fields.
        """
        first = fields[0]
        grid, rule = first.grid, first.rule
        n_fft = int(grid.n_theta * PADDING_FACTOR) if padded else grid.n_theta
        samples = [grid.ifft_modes(f.profiles.T, n_fft) for f in fields]
        profiles = grid.fft_modes(np.asarray(func(*samples), dtype=complex), n_fft).T
        trace = None
        if all(f.trace is not None for f in fields):
            boundary = [grid.ifft_modes(f.trace, n_fft) for f in fields]
            trace = grid.fft_modes(np.asarray(func(*boundary), dtype=complex), n_fft)
        return DiskField(profiles, grid, rule, trace)

    def multiply(self, other: Union["DiskField", Scalar]) -> "DiskField":
        """Pointwise product (dealiased)."""
        if not isinstance(other, DiskField):
            return self * other
        return DiskField.combine(np.multiply, self, other, padded=True)

    def map_samples(self, func: Callable[[np.ndarray], np.ndarray]) -> "DiskField":
        return DiskField.combine(func, self)

    def conj(self) -> "DiskField":
        """Complex conjugate: mode n of conj(f) is conj(f_{-n})."""
        trace = None if self.trace is None else np.conj(self.trace[::-1])
        return self.like(np.conj(self.profiles[::-1]), trace)

    def real(self) -> "DiskField":
        return (self + self.conj()) * 0.5

    def imag(self) -> "DiskField":
        return (self - self.conj()) * (-0.5j)

    def _trace_op(self, other: "DiskField", op) -> Optional[np.ndarray]:
        if self.trace is None or other.trace is None:
            return None
        return op(self.trace, other.trace)

    def __add__(self, other: "DiskField") -> "DiskField":
        if not isinstance(other, DiskField):
            return NotImplemented
        return self.like(self.profiles + other.profiles, self._trace_op(other, np.add))

    def __sub__(self, other: "DiskField") -> "DiskField":
        if not isinstance(other, DiskField):
            return NotImplemented
        return self.like(self.profiles - other.profiles, self._trace_op(other, np.subtract))

    def __neg__(self) -> "DiskField":
        return self.like(-self.profiles, None if self.trace is None else -self.trace)

    def __mul__(self, scalar: Scalar) -> "DiskField":
        if isinstance(scalar, DiskField):
            return self.multiply(scalar)
        return self.like(self.profiles * scalar, None if self.trace is None else self.trace * scalar)

    __rmul__ = __mul__

    # ==================== DERIVATIVES ====================

    def d_theta(self) -> "DiskField":
        factor = 1j * self.grid.modes
        trace = None if self.trace is None else self.trace * factor
        return self.like(self.profiles * factor[:, None], trace)

    def d_r(self) -> "DiskField":
        return self.like(self.profiles @ self.rule.differentiation.T)

    def dz(self) -> "DiskField":
        """
        Wirtinger derivative d/dz; output mode m receives
        (f_{m+1}' + (m+1) f_{m+1}/r) / 2.
        """
        dr = self.profiles @ self.rule.differentiation.T
        modes = self.grid.modes[:, None]
        shifted = 0.5 * (dr + modes * self.profiles / self.rule.nodes[None, :])
        out = np.zeros_like(self.profiles)
        out[:-1] = shifted[1:]
        return self.like(out)

    def dzbar(self) -> "DiskField":
        """
        Wirtinger derivative d/dzbar; output mode m receives
        (f_{m-1}' - (m-1) f_{m-1}/r) / 2.
        """
        dr = self.profiles @ self.rule.differentiation.T
        modes = self.grid.modes[:, None]
        shifted = 0.5 * (dr - modes * self.profiles / self.rule.nodes[None, :])
        out = np.zeros_like(self.profiles)
        out[1:] = shifted[:-1]
        return self.like(out)

    # ==================== DIAGNOSTICS ====================

    def negative_mode_fraction(self) -> np.ndarray:
        """Per radial node: l2 mass in modes n < 0 relative to the total."""
        power = np.abs(self.profiles) ** 2
        total = power.sum(axis=0)
        negative = power[: self.grid.M].sum(axis=0)
        return np.sqrt(np.divide(negative, total, out=np.zeros_like(total), where=total > 0))

    def sup_norm(self) -> float:
        """Max modulus over the grid samples (and the trace when carried)."""
        value = float(np.max(np.abs(self.synthesize())))
        if self.trace is not None:
            value = max(value, float(np.max(np.abs(self.trace_samples()))))
        return value

    def __repr__(self) -> str:
        return (f"DiskField(n_theta={self.grid.n_theta}, n_radial={self.rule.n_radial}, "
                f"trace={'yes' if self.trace is not None else 'no'})")
