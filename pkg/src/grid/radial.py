"""
Composite Gauss-Legendre rule on [0, 1] and panel-wise polynomial tools
(interpolation, differentiation, extrapolation to r = 1).
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy.special import roots_legendre


def barycentric_weights(nodes: np.ndarray) -> np.ndarray:
    """w_l = 1 / prod_{k != l} (x_l - x_k)."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / np.prod(diff, axis=1)


def lagrange_matrix(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Values of the Lagrange basis of `nodes` at `points`.

    Returns:
        L with L[i, l] = ell_l(points[i]); shape (len(points), len(nodes))
    """
    nodes = np.asarray(nodes, dtype=float)
    points = np.atleast_1d(np.asarray(points, dtype=float))
    weights = barycentric_weights(nodes)
    diff = points[:, None] - nodes[None, :]
    n = len(nodes)
    basis = np.empty((len(points), n))
    for l in range(n):
        others = np.arange(n) != l
        basis[:, l] = np.prod(diff[:, others], axis=1) * weights[l]
    return basis


def differentiation_matrix(nodes: np.ndarray) -> np.ndarray:
    """D[i, l] = ell_l'(x_i) for the Lagrange basis of `nodes`."""
    weights = barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (weights[None, :] / weights[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


@dataclass(frozen=True)
class RadialRule:
    """
    Composite Gauss-Legendre quadrature for integrals of g(rho)*rho over [0, 1].

    Attributes:
        n_panels: number of equal panels
        nodes_per_panel: Gauss-Legendre points per panel
    """

    n_panels: int = 8
    nodes_per_panel: int = 8

    def __post_init__(self):
        if self.n_panels < 1 or self.nodes_per_panel < 2:
            raise ValueError("need at least one panel with two nodes")

    @property
    def n_radial(self) -> int:
        return self.n_panels * self.nodes_per_panel

    @property
    def degree(self) -> int:
        """Polynomial degree of g integrated exactly against rho d(rho)."""
        return 2 * self.nodes_per_panel - 2

    @cached_property
    def panel_edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_panels + 1)

    @cached_property
    def _reference(self) -> Tuple[np.ndarray, np.ndarray]:
        return roots_legendre(self.nodes_per_panel)

    @cached_property
    def nodes(self) -> np.ndarray:
        x, _ = self._reference
        a, b = self.panel_edges[:-1], self.panel_edges[1:]
        return (a[:, None] + (b - a)[:, None] * (x[None, :] + 1) / 2).ravel()

    @cached_property
    def dr_weights(self) -> np.ndarray:
        """Weights for the plain integral of g over [0, 1]."""
        _, w = self._reference
        h = np.diff(self.panel_edges)
        return (h[:, None] * w[None, :] / 2).ravel()

    @cached_property
    def weights(self) -> np.ndarray:
        """Weights for the integral of g(rho)*rho over [0, 1]."""
        return self.dr_weights * self.nodes

    @cached_property
    def panel_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_panels), self.nodes_per_panel)

    def panel_slice(self, panel: int) -> slice:
        q = self.nodes_per_panel
        return slice(panel * q, (panel + 1) * q)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integral of values(rho)*rho over [0, 1] along the last axis."""
        return np.asarray(values) @ self.weights

    def node_index(self, r: float, atol: float = 1e-12):
        """Index of the node equal to r, or None."""
        hits = np.flatnonzero(np.abs(self.nodes - r) <= atol)
        return int(hits[0]) if hits.size else None

    @cached_property
    def differentiation(self) -> np.ndarray:
        """Block-diagonal panel-wise differentiation matrix (n_radial x n_radial)."""
        D = np.zeros((self.n_radial, self.n_radial))
        for panel in range(self.n_panels):
            sl = self.panel_slice(panel)
            D[sl, sl] = differentiation_matrix(self.nodes[sl])
        return D

    def interpolation_matrix(self, radii: np.ndarray) -> np.ndarray:
        """
        Panel-wise Lagrange interpolation from the nodes to arbitrary radii in [0, 1].

        Radii beyond the last node are extrapolated with the last panel's polynomial.
        """
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        panels = np.clip(np.searchsorted(self.panel_edges, radii, side="right") - 1, 0, self.n_panels - 1)
        E = np.zeros((len(radii), self.n_radial))
        for panel in np.unique(panels):
            rows = np.flatnonzero(panels == panel)
            sl = self.panel_slice(panel)
            E[np.ix_(rows, np.arange(sl.start, sl.stop))] = lagrange_matrix(self.nodes[sl], radii[rows])
        return E

    def extrapolation_weights(self, n_nodes: int = 4) -> np.ndarray:
        """Weights giving the value at r = 1 of the polynomial through the outermost n_nodes nodes."""
        if not 2 <= n_nodes <= self.n_radial:
            raise ValueError(f"n_nodes must lie in [2, {self.n_radial}]")
        weights = np.zeros(self.n_radial)
        weights[-n_nodes:] = lagrange_matrix(self.nodes[-n_nodes:], np.array([1.0]))[0]
        return weights
