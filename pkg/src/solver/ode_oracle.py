"""
Independent oracle for radial conductivities sigma(r).

Mode n of a solution of div(sigma grad u) = 0 solves
(r sigma u_n')' = sigma n^2 u_n / r, integrated here with solve_ivp from a
small radius where the regular Frobenius branch u ~ r^|n| (1 + c r^2) is used.
"""

from functools import lru_cache
from typing import Dict

import numpy as np
import sympy
from scipy.integrate import solve_ivp

from ..grid.circle import BoundarySpectrum
from ..grid.fields import DiskField
from ..grid.norms import lp_mean
from ..utils.errors import ConfigurationError

R = sympy.Symbol("r", positive=True)


class RadialOracle:
    """
    Per-mode shooting solver.

    Args:
        sigma: expression in r for the conductivity
        start: starting radius of the integration
        rtol, atol: solve_ivp tolerances
    """

    def __init__(self, sigma: str, start: float = 1e-3, rtol: float = 1e-12, atol: float = 1e-14):
        try:
            expr = sympy.sympify(sigma, locals={"r": R})
        except (sympy.SympifyError, TypeError) as e:
            raise ConfigurationError(f"cannot parse radial conductivity {sigma!r}: {e}") from e
        if expr.free_symbols - {R}:
            raise ConfigurationError(f"radial conductivity may only depend on r: {sigma!r}")
        self.text = sigma
        self.start = start
        self.rtol = rtol
        self.atol = atol
        self._log_slope = sympy.lambdify(R, sympy.diff(expr, R) / expr, "numpy")
        sigma0 = float(expr.subs(R, 0))
        # sigma(r) ~ sigma0 (1 + s r^2) near the origin
        self.s = float(sympy.diff(expr, R, 2).subs(R, 0)) / (2 * sigma0)
        self._profile = lru_cache(maxsize=None)(self._shoot)

    def _frobenius(self, a: int, r: np.ndarray):
        c = -self.s * a / (2 * (a + 1))
        u = r ** a * (1 + c * r ** 2)
        du = a * r ** max(a - 1, 0) * (1 + c * r ** 2) + 2 * c * r ** (a + 1) if a > 0 else 2 * c * r
        return u, du

    def _shoot(self, a: int):
        def rhs(r, y):
            u, du = y
            return [du, -(1.0 / r + float(self._log_slope(r))) * du + a * a * u / (r * r)]

        u0, du0 = self._frobenius(a, np.asarray(self.start))
        solution = solve_ivp(rhs, (self.start, 1.0), [float(u0), float(du0)], method="DOP853",
                             rtol=self.rtol, atol=self.atol, dense_output=True)
        if not solution.success:
            raise RuntimeError(f"radial oracle failed for mode {a}: {solution.message}")
        return solution

    def profile(self, n: int, radii: np.ndarray) -> np.ndarray:
        """Regular solution U_|n| at the radii (unnormalized)."""
        a = abs(int(n))
        radii = np.asarray(radii, dtype=float)
        if a == 0:
            return np.ones_like(radii)
        sol = self._profile(a)
        inside = radii >= self.start
        out = np.empty_like(radii)
        out[inside] = sol.sol(radii[inside])[0]
        out[~inside] = self._frobenius(a, radii[~inside])[0]
        return out

    def boundary_values(self, n: int):
        """U(1) and U'(1)."""
        a = abs(int(n))
        if a == 0:
            return 1.0, 0.0
        u, du = self._profile(a).sol(1.0)
        return float(u), float(du)

    # ==================== BOUNDARY VALUE PROBLEMS ====================

    def _modes(self, data: BoundarySpectrum, threshold: float = 1e-14):
        scale = max(float(np.max(np.abs(data.coeffs))), 1e-300)
        return [int(n) for n, c in zip(data.grid.modes, data.coeffs) if abs(c) > threshold * scale]

    def dirichlet_profiles(self, phi: BoundarySpectrum, radii: np.ndarray) -> Dict[int, np.ndarray]:
        """u_n(r) = phi_n U_n(r) / U_n(1)."""
        return {n: phi.coeff(n) * self.profile(n, radii) / self.boundary_values(n)[0]
                for n in self._modes(phi)}

    def neumann_profiles(self, g: BoundarySpectrum, radii: np.ndarray) -> Dict[int, np.ndarray]:
        """u_n(r) = g_n U_n(r) / U_n'(1), u_0 = 0."""
        return {n: g.coeff(n) * self.profile(n, radii) / self.boundary_values(n)[1]
                for n in self._modes(g) if n != 0}

    def circle_samples(self, profiles: Dict[int, np.ndarray], grid) -> np.ndarray:
        coeffs = np.zeros(grid.n_modes, dtype=complex)
        for n, values in profiles.items():
            coeffs[grid.index(n)] = np.atleast_1d(values)[0]
        return grid.ifft_modes(coeffs)

    def compare(self, u: DiskField, data: BoundarySpectrum, radii, kind: str = "dirichlet") -> Dict[str, float]:
        """
        Relative L^2(T_r) error of u against the oracle on circles of the
        given radii (interpolated radially when r is not a node).
        """
        build = self.dirichlet_profiles if kind == "dirichlet" else self.neumann_profiles
        errors = {}
        for r in radii:
            exact = self.circle_samples(build(data, np.array([r])), u.grid)
            approx = u.grid.ifft_modes(u.profiles_at([r])[:, 0])
            norm = lp_mean(exact, 2.0)
            gap = lp_mean(approx - exact, 2.0)
            errors[f"{r:g}"] = gap / norm if norm > 0 else gap
        return errors
