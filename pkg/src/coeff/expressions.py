"""
Expression grammar for coefficients, boundary data and conformal maps.

Real expressions use the variables x, y, r, theta and the functions
sin, cos, exp, log, sqrt, abs; map expressions use the complex variable z.
Closed-form partial derivatives are generated symbolically, so the
Wirtinger derivatives of a coefficient are exact.
"""

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from ..utils.errors import ConfigurationError

X, Y = sympy.symbols("x y", real=True)
R, THETA = sympy.symbols("r theta", real=True)
Z = sympy.Symbol("z")

FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "exp": sympy.exp,
    "log": sympy.log,
    "sqrt": sympy.sqrt,
    "abs": sympy.Abs,
}
ALLOWED_FUNCTIONS = (sympy.sin, sympy.cos, sympy.exp, sympy.log, sympy.Abs)

REAL_NAMESPACE = {"x": X, "y": Y, "r": R, "theta": THETA, "pi": sympy.pi, **FUNCTIONS}
COMPLEX_NAMESPACE = {"z": Z, "pi": sympy.pi, "I": sympy.I, "i": sympy.I, **FUNCTIONS}


# parse_expr evaluates the transformed text; its globals hold only the
# constructors the standard transformations emit.
PARSER_GLOBALS = {
    "__builtins__": {},
    "Integer": sympy.Integer,
    "Float": sympy.Float,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "Function": sympy.Function,
}
FORBIDDEN_SYNTAX = re.compile(r"__|['\"`\\]|(?:[A-Za-z_]\w*|[)\]])\s*\.")


def _parse(text: str, namespace: dict, variables: set) -> sympy.Expr:
    """
    Parse config-supplied text. Python builtins are out of reach and
    string literals, attribute access and dunder names are refused before
    evaluation.
    """
    if not isinstance(text, str) or not text.strip():
        raise ConfigurationError("expression must be a non-empty string")
    if FORBIDDEN_SYNTAX.search(text):
        raise ConfigurationError(f"expression {text!r} is not in the grammar")
    try:
        expr = parse_expr(text, local_dict=dict(namespace), global_dict=dict(PARSER_GLOBALS),
                          transformations=standard_transformations)
    except Exception as e:
        raise ConfigurationError(f"cannot parse expression {text!r}: {e}") from e
    if not isinstance(expr, sympy.Expr):
        raise ConfigurationError(f"expression {text!r} does not evaluate to a number")

    unknown = expr.free_symbols - variables
    if unknown:
        raise ConfigurationError(f"unknown variables in {text!r}: {sorted(map(str, unknown))}")
    for call in expr.atoms(sympy.Function):
        if not isinstance(call, ALLOWED_FUNCTIONS):
            raise ConfigurationError(f"function {call.func} is not part of the expression grammar")
    return expr


def _lambdify(args, expr) -> Callable:
    func = sympy.lambdify(args, expr, modules="numpy")

    def vectorized(*values):
        out = func(*values)
        return np.broadcast_to(np.asarray(out), np.broadcast(*values).shape)

    return vectorized


@dataclass(frozen=True)
class RealExpression:
    """
    Real expression in the plane with closed-form partial derivatives.

    Attributes:
        text: source text
        expr: sympy expression in x, y
    """

    text: str
    expr: sympy.Expr

    @classmethod
    def parse(cls, text: str) -> "RealExpression":
        """
        Parse text over x, y, r, theta.

        Raises:
            ConfigurationError: If the text is not in the grammar
        """
        expr = _parse(text, REAL_NAMESPACE, {X, Y, R, THETA})
        expr = expr.subs({R: sympy.sqrt(X ** 2 + Y ** 2), THETA: sympy.atan2(Y, X)})
        return cls(text, expr)

    @classmethod
    def from_sympy(cls, expr: sympy.Expr, text: str = "") -> "RealExpression":
        return cls(text or str(expr), expr)

    @property
    def is_constant(self) -> bool:
        return not self.expr.free_symbols

    def _compiled(self, expr) -> Callable[[np.ndarray], np.ndarray]:
        func = _lambdify((X, Y), expr)

        def at(z):
            z = np.asarray(z, dtype=complex)
            return np.asarray(func(z.real, z.imag), dtype=float)

        return at

    def function(self) -> Callable[[np.ndarray], np.ndarray]:
        """Callable z -> value."""
        return self._compiled(self.expr)

    def wirtinger(self):
        """
        Callables z -> d/dz and z -> d/dzbar of the expression:
        (d_x -/+ i d_y) / 2.
        """
        ex = sympy.diff(self.expr, X)
        ey = sympy.diff(self.expr, Y)
        fx, fy = self._compiled(ex), self._compiled(ey)

        def d(z):
            return 0.5 * (fx(z) - 1j * fy(z))

        def dbar(z):
            return 0.5 * (fx(z) + 1j * fy(z))

        return d, dbar

    def transform(self, mapping: Callable[[sympy.Expr], sympy.Expr]) -> "RealExpression":
        return RealExpression.from_sympy(mapping(self.expr))


@dataclass(frozen=True)
class ComplexExpression:
    """Holomorphic expression in z with its derivative."""

    text: str
    expr: sympy.Expr

    @classmethod
    def parse(cls, text: str) -> "ComplexExpression":
        """
        Raises:
            ConfigurationError: If the text is not in the grammar
        """
        return cls(text, _parse(text, COMPLEX_NAMESPACE, {Z}))

    def function(self) -> Callable[[np.ndarray], np.ndarray]:
        func = _lambdify((Z,), self.expr)
        return lambda z: np.asarray(func(np.asarray(z, dtype=complex)), dtype=complex)

    def derivative(self) -> Callable[[np.ndarray], np.ndarray]:
        func = _lambdify((Z,), sympy.diff(self.expr, Z))
        return lambda z: np.asarray(func(np.asarray(z, dtype=complex)), dtype=complex)


def boundary_function(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Real expression evaluated on the unit circle as a function of theta."""
    func = RealExpression.parse(text).function()
    return lambda theta: func(np.exp(1j * np.asarray(theta)))
