"""
Conformal maps psi: D -> Omega used to transport problems to simply connected domains.

Only the computable invariants are checked: a nonvanishing derivative on a
sample of the closed disk and a simple (non self-intersecting) boundary image.
Dini smoothness of custom maps is attested by the caller.
"""

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Any, Dict, Mapping

import numpy as np
from scipy.optimize import newton

from config.settings import settings
from ..coeff.expressions import ComplexExpression
from ..utils.errors import ConfigurationError
from ..utils.logger import get_logger

logger = get_logger(__name__, settings.LOG_LEVEL)

MAP_KINDS = ("identity", "affine", "quadratic", "expression")


def _segments_cross(points: np.ndarray) -> bool:
    """True when two non-adjacent edges of the closed polygon intersect."""
    a = points
    b = np.roll(points, -1)
    n = len(points)

    def orient(p, q, r):
        return np.sign((q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real))

    A1, B1 = a[:, None], b[:, None]
    A2, B2 = a[None, :], b[None, :]
    crossing = (orient(A1, B1, A2) * orient(A1, B1, B2) < 0) & (orient(A2, B2, A1) * orient(A2, B2, B1) < 0)
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    adjacent = (gap <= 1) | (gap == n - 1)
    return bool(np.any(crossing & ~adjacent))


class ConformalMap(ABC):
    """
    Injective holomorphic map of a neighbourhood of the closed disk.

    Subclasses provide psi and dpsi; check() validates the sampled invariants.
    """

    name: str = "map"

    @abstractmethod
    def psi(self, z: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def dpsi(self, z: np.ndarray) -> np.ndarray:
        pass

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return self.psi(np.asarray(z, dtype=complex))

    @cached_property
    def min_derivative(self) -> float:
        """min |dpsi| over a polar sample of the closed disk."""
        r = np.linspace(0.0, 1.0, 33)
        theta = np.linspace(0.0, 2 * np.pi, 128, endpoint=False)
        z = r[:, None] * np.exp(1j * theta[None, :])
        return float(np.min(np.abs(self.dpsi(z))))

    def check(self, samples: int = 256) -> "ConformalMap":
        """
        Raises:
            ConfigurationError: If dpsi vanishes on the sample or the boundary
                image is not a simple closed curve
        """
        if not self.min_derivative > 0:
            raise ConfigurationError(f"{self.name}: derivative vanishes on the closed disk")
        boundary = self.psi(np.exp(2j * np.pi * np.arange(samples) / samples))
        if not np.all(np.isfinite(boundary)) or _segments_cross(boundary):
            raise ConfigurationError(f"{self.name}: boundary image is not a simple closed curve")
        return self

    def inverse(self, w: np.ndarray, tol: float = 1e-13, max_iter: int = 50) -> np.ndarray:
        """psi^{-1}(w) by Newton's method started at the affine approximation around 0."""
        w = np.asarray(w, dtype=complex)
        psi0 = complex(self.psi(np.zeros(1))[0])
        dpsi0 = complex(self.dpsi(np.zeros(1))[0])
        start = ((w - psi0) / dpsi0).ravel()
        if start.size == 0:
            return start.reshape(w.shape)
        flat = w.ravel()
        if flat.size == 1:
            # newton only vectorizes for more than one starting point
            flat, start = np.repeat(flat, 2), np.repeat(start, 2)
        z = newton(lambda x: self.psi(x) - flat, start, fprime=self.dpsi, tol=tol, maxiter=max_iter)
        return np.asarray(z, dtype=complex)[: w.size].reshape(w.shape)

    def compose(self, automorphism: "MobiusAutomorphism") -> "ComposedMap":
        return ComposedMap(self, automorphism)

    def to_spec(self) -> Dict[str, Any]:
        raise NotImplementedError(f"{self.name} has no serializable spec")


class IdentityMap(ConformalMap):
    name = "identity"

    def psi(self, z):
        return np.asarray(z, dtype=complex)

    def dpsi(self, z):
        return np.ones(np.shape(z), dtype=complex)

    def to_spec(self):
        return {"kind": "identity"}


class AffineMap(ConformalMap):
    """psi(z) = a z + b, a != 0."""

    name = "affine"

    def __init__(self, a: complex = 1.0, b: complex = 0.0):
        if a == 0:
            raise ConfigurationError("affine map needs a != 0")
        self.a = complex(a)
        self.b = complex(b)

    def psi(self, z):
        return self.a * np.asarray(z, dtype=complex) + self.b

    def dpsi(self, z):
        return np.full(np.shape(z), self.a, dtype=complex)

    def inverse(self, w, tol: float = 1e-13, max_iter: int = 50):
        return (np.asarray(w, dtype=complex) - self.b) / self.a

    def to_spec(self):
        return {"kind": "affine", "a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}


class QuadraticMap(ConformalMap):
    """psi(z) = z + eps z^2; injective on the closed disk for |eps| < 1/2."""

    name = "quadratic"

    def __init__(self, eps: float = 0.3):
        if not abs(eps) < 0.5:
            raise ConfigurationError(f"quadratic map needs |eps| < 1/2, got {eps}")
        self.eps = complex(eps)

    def psi(self, z):
        z = np.asarray(z, dtype=complex)
        return z + self.eps * z * z

    def dpsi(self, z):
        return 1.0 + 2.0 * self.eps * np.asarray(z, dtype=complex)

    def to_spec(self):
        return {"kind": "quadratic", "eps": self.eps.real if self.eps.imag == 0 else [self.eps.real, self.eps.imag]}


class ExpressionMap(ConformalMap):
    """User map given as an expression in z; derivative generated symbolically."""

    name = "expression"

    def __init__(self, text: str):
        expr = ComplexExpression.parse(text)
        self.text = text
        self._psi = expr.function()
        self._dpsi = expr.derivative()

    def psi(self, z):
        return self._psi(z)

    def dpsi(self, z):
        return self._dpsi(z)

    def to_spec(self):
        return {"kind": "expression", "expression": self.text}


class MobiusAutomorphism(ConformalMap):
    """phi(z) = e^{i t} (z - a) / (1 - conj(a) z), |a| < 1; maps D onto D."""

    name = "mobius"

    def __init__(self, a: complex = 0.0, rotation: float = 0.0):
        if not abs(a) < 1:
            raise ConfigurationError(f"automorphism needs |a| < 1, got {a}")
        self.a = complex(a)
        self.rotation = float(rotation)
        self._unit = np.exp(1j * self.rotation)

    def psi(self, z):
        z = np.asarray(z, dtype=complex)
        return self._unit * (z - self.a) / (1 - np.conj(self.a) * z)

    def dpsi(self, z):
        z = np.asarray(z, dtype=complex)
        return self._unit * (1 - abs(self.a) ** 2) / (1 - np.conj(self.a) * z) ** 2

    def inverse(self, w, tol: float = 1e-13, max_iter: int = 50):
        u = np.asarray(w, dtype=complex) / self._unit
        return (u + self.a) / (1 + np.conj(self.a) * u)


class ComposedMap(ConformalMap):
    """psi o phi for a disk automorphism phi: same image domain, other parametrization."""

    def __init__(self, outer: ConformalMap, automorphism: MobiusAutomorphism):
        self.outer = outer
        self.automorphism = automorphism
        self.name = f"{outer.name}∘mobius"

    def psi(self, z):
        return self.outer.psi(self.automorphism.psi(z))

    def dpsi(self, z):
        return self.outer.dpsi(self.automorphism.psi(z)) * self.automorphism.dpsi(z)

    def inverse(self, w, tol: float = 1e-13, max_iter: int = 50):
        return self.automorphism.inverse(self.outer.inverse(w, tol, max_iter))


def _complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(value[0], value[1] if len(value) > 1 else 0.0)
    return complex(value)


def map_from_spec(spec: Mapping[str, Any]) -> ConformalMap:
    """
    Build and check a map from {"kind": ..., parameters}.

    Raises:
        ConfigurationError: On an unknown kind or an invariant violation
    """
    kind = spec.get("kind", "identity")
    if kind == "identity":
        cmap = IdentityMap()
    elif kind == "affine":
        cmap = AffineMap(_complex(spec.get("a", 1.0)), _complex(spec.get("b", 0.0)))
    elif kind == "quadratic":
        eps = _complex(spec.get("eps", 0.3))
        cmap = QuadraticMap(eps.real if eps.imag == 0 else eps)
    elif kind == "expression":
        if "expression" not in spec:
            raise ConfigurationError("expression map needs an 'expression' entry")
        cmap = ExpressionMap(spec["expression"])
    else:
        raise ConfigurationError(f"unknown map kind {kind!r}; expected one of {MAP_KINDS}")
    logger.debug(f"map {cmap.name}: min |dpsi| = {cmap.min_derivative:.3e}")
    return cmap.check()
