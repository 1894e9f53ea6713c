"""
Cached radial integration tables for the area operators.

For output mode m the solid Cauchy transform only sees input mode n = m + 1:

    m <= -1:  (Tw)_m(r) =  2 * int_0^r w_n(rho) (rho/r)^{|m|} d rho
    m >=  0:  (Tw)_m(r) = -2 * int_r^1 w_n(rho) (r/rho)^{m}   d rho

Both integrals are accumulated node by node. With A_j the first integral at
r_j and I_j its part over [r_{j-1}, r_j],

    A_j = (r_{j-1}/r_j)^{|m|} A_{j-1} + I_j

and the second runs the same recurrence outward from r = 1. Every power is a
ratio in [0, 1]. A segment between neighbouring nodes is split at panel edges;
each piece uses a Gauss-Legendre rule combined with Lagrange interpolation of
the profile from the panel nodes.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.special import roots_legendre

from ..grid.circle import CircleGrid
from ..grid.radial import RadialRule, lagrange_matrix


@dataclass(frozen=True, eq=False)
class OperatorWorkspace:
    """
    Attributes:
        grid: circle grid
        rule: radial rule
        inward: (n_modes, n_radial, width); weights of the segment integral
            over [r_{j-1}, r_j] against (rho/r_j)^{|m|}
        outward: (n_modes, n_radial, width); segment [r_j, r_{j+1}] (r_n = 1)
            against (r_j/rho)^{|m|}
        inward_cols, outward_cols: (n_radial, width) node indices of the
            profile values each segment row reads
        inward_decay, outward_decay: (n_modes, n_radial) carry factors
            (r_{j-1}/r_j)^{|m|} and (r_j/r_{j+1})^{|m|}; zero at the start
        boundary_weights: (n_modes, n_radial); r = 1 formula of the same map
        reflect_weights: (n_modes, n_radial); weights of int_0^1 g(rho) rho^m d rho
    """

    grid: CircleGrid
    rule: RadialRule
    inward: np.ndarray = field(repr=False)
    outward: np.ndarray = field(repr=False)
    inward_cols: np.ndarray = field(repr=False)
    outward_cols: np.ndarray = field(repr=False)
    inward_decay: np.ndarray = field(repr=False)
    outward_decay: np.ndarray = field(repr=False)
    boundary_weights: np.ndarray = field(repr=False)
    reflect_weights: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, grid: CircleGrid, rule: RadialRule) -> "OperatorWorkspace":
        nodes, dr = rule.nodes, rule.dr_weights
        n_r = rule.n_radial
        k = np.abs(grid.modes).astype(float)[:, None]

        inner = np.concatenate([[0.0], nodes[:-1]])
        outer = np.concatenate([nodes[1:], [1.0]])
        inward, inward_cols = _segment_tables(rule, inner, nodes, k, toward_origin=True)
        outward, outward_cols = _segment_tables(rule, nodes, outer, k, toward_origin=False)

        inward_decay = (inner / nodes)[None, :] ** k
        inward_decay[:, 0] = 0.0
        outward_decay = (nodes / outer)[None, :] ** k
        outward_decay[:, -1] = 0.0

        boundary = np.zeros((grid.n_modes, n_r))
        reflect = np.zeros((grid.n_modes, n_r))
        for idx, m in enumerate(grid.modes):
            power = nodes ** abs(int(m))
            if m <= -1:
                boundary[idx] = 2.0 * dr * power
            reflect[idx] = dr * power

        arrays = (inward, outward, inward_cols, outward_cols, inward_decay, outward_decay, boundary, reflect)
        for array in arrays:
            array.setflags(write=False)
        return cls(grid, rule, *arrays)

    def cauchy_profiles(self, source: np.ndarray) -> np.ndarray:
        """
        Profiles of T for a shifted source (row m holds input mode m + 1).
        Negative output modes take the inward sums, the others the outward sums.
        """
        inc_in = np.einsum("mjc,mjc->mj", self.inward, source[:, self.inward_cols])
        inc_out = np.einsum("mjc,mjc->mj", self.outward, source[:, self.outward_cols])
        n_r = self.rule.n_radial

        lower = np.zeros_like(inc_in)
        acc = np.zeros(source.shape[0], dtype=inc_in.dtype)
        for j in range(n_r):
            acc = self.inward_decay[:, j] * acc + inc_in[:, j]
            lower[:, j] = acc

        upper = np.zeros_like(inc_out)
        acc = np.zeros(source.shape[0], dtype=inc_out.dtype)
        for j in range(n_r - 1, -1, -1):
            acc = self.outward_decay[:, j] * acc + inc_out[:, j]
            upper[:, j] = acc

        negative = (self.grid.modes <= -1)[:, None]
        return np.where(negative, 2.0 * lower, -2.0 * upper)


def _pieces(rule: RadialRule, lo: float, hi: float) -> List[Tuple[int, float, float]]:
    """(panel, a, b) pieces of [lo, hi] split at the panel edges."""
    edges = rule.panel_edges
    out = []
    for panel in range(rule.n_panels):
        a, b = max(lo, edges[panel]), min(hi, edges[panel + 1])
        if b > a:
            out.append((panel, a, b))
    return out


def _segment_tables(rule: RadialRule, lo: np.ndarray, hi: np.ndarray, k: np.ndarray,
                    toward_origin: bool) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per node j, weights over the segment [lo_j, hi_j] for every |m| in k.
    The kernel is (rho/hi_j)^|m| toward the origin, (lo_j/rho)^|m| otherwise.
    A segment touches at most two panels, so rows have width 2q.
    """
    q = rule.nodes_per_panel
    y, v = roots_legendre(2 * q)
    n_r = rule.n_radial
    width = 2 * q
    tables = np.zeros((k.shape[0], n_r, width))
    cols = np.zeros((n_r, width), dtype=int)

    for j in range(n_r):
        for slot, (panel, a, b) in enumerate(_pieces(rule, lo[j], hi[j])):
            span = rule.panel_slice(panel)
            sub_nodes = a + (b - a) * (y + 1) / 2
            sub_weights = (b - a) / 2 * v
            ratio = sub_nodes / hi[j] if toward_origin else lo[j] / sub_nodes
            interp = lagrange_matrix(rule.nodes[span], sub_nodes)
            block = slice(slot * q, (slot + 1) * q)
            tables[:, j, block] = (sub_weights[None, :] * ratio[None, :] ** k) @ interp
            cols[j, block] = np.arange(span.start, span.stop)
    return tables, cols


@lru_cache(maxsize=8)
def get_workspace(grid: CircleGrid, rule: RadialRule) -> OperatorWorkspace:
    """Shared read-only workspace per (grid, rule)."""
    return OperatorWorkspace.build(grid, rule)


def workspace_for(field) -> OperatorWorkspace:
    return get_workspace(field.grid, field.rule)
