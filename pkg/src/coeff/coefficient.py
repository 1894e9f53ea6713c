"""
Coefficient algebra: dilatation nu, conductivity sigma = (1 - nu)/(1 + nu),
alpha = -dbar(nu)/(1 - nu^2) and alpha_1 = d(nu)/(1 - nu^2).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
import sympy

from config.settings import settings
from ..grid.circle import CircleGrid
from ..grid.fields import DiskField
from ..grid.radial import RadialRule
from ..utils.errors import ConfigurationError
from ..utils.logger import get_logger
from .expressions import X, Y, RealExpression

logger = get_logger(__name__, settings.LOG_LEVEL)

PointFunction = Callable[[np.ndarray], np.ndarray]
ArrayLike = Union[float, np.ndarray]


def sigma_from_nu(nu: ArrayLike) -> ArrayLike:
    return (1 - nu) / (1 + nu)


def nu_from_sigma(sigma: ArrayLike) -> ArrayLike:
    return (1 - sigma) / (1 + sigma)


@dataclass(frozen=True, eq=False)
class Coefficient:
    """
    Real dilatation nu with its Wirtinger derivatives sampled on the disk grid.

    Attributes:
        nu: real DiskField (carries its boundary trace)
        d_nu: DiskField of d(nu)/dz
        dbar_nu: DiskField of d(nu)/dzbar
        kappa: declared bound on |nu|, < 1
        lipschitz_bound: W^{1,inf} constant of nu
        nu_func, d_nu_func, dbar_nu_func: closed forms z -> value, when known
        exact_derivatives: False when derivatives come from spectral differentiation
        label: human readable description
    """

    nu: DiskField
    d_nu: DiskField
    dbar_nu: DiskField
    kappa: float
    lipschitz_bound: float
    nu_func: Optional[PointFunction] = field(default=None, repr=False)
    d_nu_func: Optional[PointFunction] = field(default=None, repr=False)
    dbar_nu_func: Optional[PointFunction] = field(default=None, repr=False)
    exact_derivatives: bool = True
    label: str = ""

    def __post_init__(self):
        samples = self.nu.synthesize()
        if np.max(np.abs(samples.imag), initial=0.0) > 1e-10:
            raise ValueError("nu must be real-valued")
        if not 0 <= self.kappa < 1:
            raise ValueError(f"kappa must lie in [0, 1), got {self.kappa}")
        sup = float(np.max(np.abs(samples.real)))
        if self.nu.trace is not None:
            sup = max(sup, float(np.max(np.abs(self.nu.trace_samples().real))))
        if sup > self.kappa + 1e-12:
            raise ValueError(f"max |nu| = {sup:.6f} exceeds kappa = {self.kappa:.6f}")

    # ==================== CONSTRUCTORS ====================

    @classmethod
    def from_functions(cls, nu: PointFunction, d_nu: PointFunction, dbar_nu: PointFunction,
                       grid: CircleGrid, rule: RadialRule, kappa: Optional[float] = None,
                       lipschitz_bound: Optional[float] = None, label: str = "") -> "Coefficient":
        """Sample closed-form nu and derivatives (callables of z) onto the grid."""
        nu_field = DiskField.from_callable(nu, grid, rule)
        d_field = DiskField.from_callable(d_nu, grid, rule)
        dbar_field = DiskField.from_callable(dbar_nu, grid, rule)
        if kappa is None:
            kappa = max(float(np.max(np.abs(nu_field.synthesize().real))),
                        float(np.max(np.abs(nu_field.trace_samples().real))))
        if kappa >= 1:
            raise ValueError(f"sampled sup |nu| = {kappa:.6f} is not below 1")
        if lipschitz_bound is None:
            lipschitz_bound = 2.0 * d_field.sup_norm()
        return cls(nu_field, d_field, dbar_field, float(kappa), float(lipschitz_bound),
                   nu, d_nu, dbar_nu, True, label)

    @classmethod
    def constant(cls, nu: float, grid: CircleGrid, rule: RadialRule) -> "Coefficient":
        if abs(nu) >= 1:
            raise ValueError(f"constant nu must satisfy |nu| < 1, got {nu}")
        zero = lambda z: np.zeros(np.shape(z), dtype=complex)
        return cls.from_functions(lambda z: np.full(np.shape(z), float(nu)), zero, zero,
                                  grid, rule, kappa=abs(nu), lipschitz_bound=0.0,
                                  label=f"constant nu={nu}")

    @classmethod
    def constant_sigma(cls, sigma: float, grid: CircleGrid, rule: RadialRule) -> "Coefficient":
        if sigma <= 0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        return cls.constant(nu_from_sigma(float(sigma)), grid, rule)

    @classmethod
    def from_expression(cls, expression: Union[str, RealExpression], grid: CircleGrid,
                        rule: RadialRule, of: str = "nu", kappa: Optional[float] = None) -> "Coefficient":
        """
        Coefficient from a closed-form expression in x, y, r, theta.

        Args:
            expression: text or parsed expression
            of: "nu" if the expression is the dilatation, "sigma" for the conductivity
            kappa: declared bound (measured on the grid when omitted)

        Raises:
            ConfigurationError: If the expression is invalid or not admissible
        """
        expr = expression if isinstance(expression, RealExpression) else RealExpression.parse(expression)
        if of == "sigma":
            expr = expr.transform(lambda s: (1 - s) / (1 + s))
        elif of != "nu":
            raise ConfigurationError(f"'of' must be 'nu' or 'sigma', got {of!r}")
        d, dbar = expr.wirtinger()
        try:
            return cls.from_functions(expr.function(), d, dbar, grid, rule, kappa=kappa,
                                      label=f"{of} = {expression if isinstance(expression, str) else expression.text}")
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

    @classmethod
    def radial(cls, sigma: Union[str, sympy.Expr], grid: CircleGrid, rule: RadialRule) -> "Coefficient":
        """Radial conductivity sigma(r) given as an expression in r."""
        if isinstance(sigma, str):
            return cls.from_expression(sigma, grid, rule, of="sigma")
        return cls.from_expression(RealExpression.from_sympy(sigma.subs("r", sympy.sqrt(X ** 2 + Y ** 2))),
                                   grid, rule, of="sigma")

    @classmethod
    def from_samples(cls, nu: DiskField, kappa: Optional[float] = None) -> "Coefficient":
        """
        Grid-only nu: derivatives by spectral differentiation (accuracy caveat,
        flagged through exact_derivatives=False).
        """
        logger.warning("nu given by samples only; Wirtinger derivatives use spectral differentiation")
        nu = nu.real()
        if kappa is None:
            kappa = nu.sup_norm()
        d_field, dbar_field = nu.dz(), nu.dzbar()
        return cls(nu, d_field, dbar_field, float(kappa), 2.0 * d_field.sup_norm(),
                   exact_derivatives=False, label="sampled nu")

    # ==================== DERIVED ====================

    @property
    def grid(self) -> CircleGrid:
        return self.nu.grid

    @property
    def rule(self) -> RadialRule:
        return self.nu.rule

    @property
    def is_constant(self) -> bool:
        return self.dbar_nu.sup_norm() == 0.0 and self.d_nu.sup_norm() == 0.0

    @property
    def has_closed_form(self) -> bool:
        return self.nu_func is not None and self.dbar_nu_func is not None

    def negated(self) -> "Coefficient":
        """Coefficient of -nu (conductivity 1/sigma)."""
        neg = (lambda f: None if f is None else (lambda z: -f(z)))
        return Coefficient(-self.nu, -self.d_nu, -self.dbar_nu, self.kappa, self.lipschitz_bound,
                           neg(self.nu_func), neg(self.d_nu_func), neg(self.dbar_nu_func),
                           self.exact_derivatives, f"-({self.label})")

    def resample(self, grid: CircleGrid, rule: RadialRule) -> "Coefficient":
        """
        Same closed-form coefficient on another grid.

        Raises:
            ValueError: If the coefficient is only known by samples
        """
        if not self.has_closed_form or self.d_nu_func is None:
            raise ValueError("only closed-form coefficients can be resampled")
        return Coefficient.from_functions(self.nu_func, self.d_nu_func, self.dbar_nu_func, grid, rule,
                                          lipschitz_bound=self.lipschitz_bound,
                                          label=self.label)

    def nu_at(self, z: np.ndarray) -> np.ndarray:
        """nu at arbitrary points (closed form or interpolation)."""
        if self.nu_func is not None:
            return np.asarray(self.nu_func(z), dtype=float)
        return self.nu.evaluate(z).real

    def sigma_at(self, z: np.ndarray) -> np.ndarray:
        return sigma_from_nu(self.nu_at(z))

    def nu_boundary(self) -> np.ndarray:
        """Real samples of nu on the unit circle."""
        if self.nu.trace is not None:
            return self.nu.trace_samples().real
        return self.grid.ifft_modes(self.nu.extrapolated_trace()).real

    def sigma_boundary(self) -> np.ndarray:
        return sigma_from_nu(self.nu_boundary())

    def ellipticity(self):
        """Sampled bounds (c, C) with c <= sigma <= C."""
        sigma = sigma_from_nu(self.nu.synthesize().real)
        return float(np.min(sigma)), float(np.max(sigma))


@dataclass(frozen=True)
class SigmaFields:
    sigma: DiskField
    sqrt_sigma: DiskField
    inv_sqrt_sigma: DiskField


def nu_to_sigma(coef: Coefficient) -> SigmaFields:
    """sigma = (1 - nu)/(1 + nu) together with sigma^{1/2} and sigma^{-1/2}."""
    nu = coef.nu
    return SigmaFields(
        sigma=DiskField.combine(lambda v: sigma_from_nu(v.real) + 0j, nu),
        sqrt_sigma=DiskField.combine(lambda v: np.sqrt(sigma_from_nu(v.real)) + 0j, nu),
        inv_sqrt_sigma=DiskField.combine(lambda v: 1.0 / np.sqrt(sigma_from_nu(v.real)) + 0j, nu),
    )


@dataclass(frozen=True, eq=False)
class AlphaField:
    """
    Coefficient of dbar(w) = alpha * conj(w).

    Attributes:
        alpha: complex DiskField
        coefficient: the Coefficient it was derived from (None for a free alpha)
    """

    alpha: DiskField
    coefficient: Optional[Coefficient] = None

    @property
    def from_coefficient(self) -> bool:
        return self.coefficient is not None

    @property
    def sup_norm(self) -> float:
        return self.alpha.sup_norm()

    @property
    def is_zero(self) -> bool:
        return not np.any(self.alpha.profiles) and (self.alpha.trace is None or not np.any(self.alpha.trace))

    @classmethod
    def zero(cls, grid: CircleGrid, rule: RadialRule) -> "AlphaField":
        return cls(DiskField.zeros(grid, rule))

    @classmethod
    def from_callable(cls, func: PointFunction, grid: CircleGrid, rule: RadialRule) -> "AlphaField":
        """Free L^inf alpha given pointwise."""
        return cls(DiskField.from_callable(func, grid, rule))


def alpha_from_nu(coef: Coefficient) -> AlphaField:
    """alpha = -dbar(nu)/(1 - nu^2), pointwise."""
    if not coef.exact_derivatives:
        logger.warning("alpha computed from spectrally differentiated nu; accuracy is reduced")
    alpha = DiskField.combine(lambda nu, dbar: -dbar / (1 - nu.real ** 2), coef.nu, coef.dbar_nu)
    return AlphaField(alpha, coef)


def alpha1_from_nu(coef: Coefficient) -> DiskField:
    """alpha_1 = d(nu)/(1 - nu^2): coefficient of the gradient equation."""
    return DiskField.combine(lambda nu, d: d / (1 - nu.real ** 2), coef.nu, coef.d_nu)


def alpha_consistency(coef: Coefficient) -> float:
    """
    Relative discrepancy between alpha and the spectral dbar of log(sigma^{1/2}).
    """
    alpha = alpha_from_nu(coef).alpha
    log_half = DiskField.combine(lambda v: 0.5 * np.log(sigma_from_nu(v.real)) + 0j, coef.nu)
    diff = log_half.dzbar() - alpha
    scale = max(alpha.sup_norm(), 1e-300)
    return float(np.max(np.abs(diff.synthesize())) / scale) if scale > 1e-300 else float(diff.sup_norm())
