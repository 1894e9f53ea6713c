"""
Duality pairing <f, g> = Re (1/2pi) int f g d theta and the identities it
satisfies with the generalized Hilbert transform.
"""

from typing import Optional

import numpy as np
from scipy.linalg import lstsq

from config.settings import settings
from ..coeff.coefficient import Coefficient
from ..grid.circle import BoundarySpectrum
from ..grid.norms import boundary_norm
from ..solver.config import SolveConfig
from ..solver.dirichlet import hilbert_nu
from ..utils.logger import get_logger
from .columns import hilbert_columns, trig_basis

logger = get_logger(__name__, settings.LOG_LEVEL)


def duality_pair(f: BoundarySpectrum, g: BoundarySpectrum) -> float:
    """Re sum_n f_n g_{-n}; spectrally exact."""
    return float(np.sum(f.coeffs * g.coeffs[::-1]).real)


def adjoint_check(coef: Coefficient, cfg: Optional[SolveConfig] = None, size: int = 16,
                  threads: Optional[int] = None) -> dict:
    """
    Checks on the real trigonometric basis e_1..e_K:

    - symmetry of D_ij = <d_theta H_nu e_i, e_j>;
    - the adjoint formula H_nu^* u = -d_theta H_nu U (d_theta U = u - mean u),
      comparing C_ij = <-d_theta H_nu U_i, e_j> with G_ij = <e_i, H_nu e_j>.

    Both violations are relative to the largest matrix entry. K solves.
    """
    cfg = cfg or SolveConfig.from_settings()
    grid = coef.grid
    if size > 2 * grid.M:
        raise ValueError(f"basis size {size} exceeds 2M = {2 * grid.M}")
    if size % 2:
        size += 1
    basis = trig_basis(grid, size)
    columns = hilbert_columns(basis, coef, cfg, threads)

    D = np.array([[duality_pair(columns[i].derivative(), basis[j]) for j in range(size)] for i in range(size)])
    G = np.array([[duality_pair(basis[i], columns[j]) for j in range(size)] for i in range(size)])

    # U_i lies in the span of the same-frequency pair: cos k -> sin k / k, sin k -> -cos k / k
    C = np.zeros((size, size))
    for i in range(size):
        k = i // 2 + 1
        h_u = columns[i + 1] * (1.0 / k) if i % 2 == 0 else columns[i - 1] * (-1.0 / k)
        image = -h_u.derivative()
        C[i] = [duality_pair(image, basis[j]) for j in range(size)]

    scale = max(float(np.max(np.abs(D))), float(np.max(np.abs(G))), 1e-300)
    result = {
        "size": size,
        "symmetry_violation": float(np.max(np.abs(D - D.T))) / scale,
        "adjoint_violation": float(np.max(np.abs(C - G))) / scale,
        "hilbert_matrix": G.T,
    }
    logger.info(f"adjoint_check: symmetry {result['symmetry_violation']:.3e}, "
                f"adjoint {result['adjoint_violation']:.3e} (K={size})")
    return result


def _trace_of_solution(phi: BoundarySpectrum, coef: Coefficient, cfg: SolveConfig) -> BoundarySpectrum:
    """phi + i H_nu phi."""
    return phi + hilbert_nu(phi, coef, cfg) * 1j


def orthogonality_check(coef: Coefficient, cfg: Optional[SolveConfig] = None, trials: int = 20,
                        rng: Optional[np.random.Generator] = None, degree: int = 6,
                        dual_size: Optional[int] = 8) -> dict:
    """
    For random real phi, gamma: <d_theta(gamma + i H_{-nu} gamma), phi + i H_nu phi>
    relative to the product of the L^2 norms; max over trials.

    With dual_size set, also evaluates both sides of the inf/sup duality
    relation at p = q = 2 over a dual_size-dimensional truncation.
    """
    cfg = cfg or SolveConfig.from_settings()
    rng = rng or np.random.default_rng(settings.SEED)
    negated = coef.negated()
    worst = 0.0
    for _ in range(trials):
        phi = BoundarySpectrum.random_real(coef.grid, rng, degree)
        gamma = BoundarySpectrum.random_real(coef.grid, rng, degree)
        f = _trace_of_solution(phi, coef, cfg)
        dPhi = _trace_of_solution(gamma, negated, cfg).derivative()
        scale = boundary_norm(f, 2.0) * boundary_norm(dPhi, 2.0)
        worst = max(worst, abs(duality_pair(dPhi, f)) / scale if scale > 0 else 0.0)
    result = {"trials": trials, "max_pairing": worst}
    if dual_size:
        result["duality"] = dual_gap(coef, cfg, dual_size, rng)
    logger.info(f"orthogonality_check: max relative pairing {worst:.3e} over {trials} trials")
    return result


def _stack_real(vectors) -> np.ndarray:
    return np.array([np.concatenate([v.real, v.imag]) for v in vectors])


def dual_gap(coef: Coefficient, cfg: SolveConfig, size: int,
             rng: np.random.Generator, degree: int = 4) -> dict:
    """
    p = 2 spot check of inf_g ||Phi - g||_2 = sup_f <Phi, tr f> / ||tr f||_2 for a random
    complex Phi, with g ranging over d_theta(tr H_{-nu}) and f over H_nu, both
    truncated to the real span of size basis functions (plus constants for f).
    Truncation can only raise the inf side and lower the sup side.
    """
    grid = coef.grid
    phi_coeffs = np.zeros(grid.n_modes, dtype=complex)
    for n in range(-degree, degree + 1):
        phi_coeffs[grid.index(n)] = rng.standard_normal() + 1j * rng.standard_normal()
    Phi = BoundarySpectrum(phi_coeffs, grid)

    basis = trig_basis(grid, size)
    minus = hilbert_columns(basis, coef.negated(), cfg)
    plus = hilbert_columns(basis, coef, cfg)

    # inf side: real least squares over the annihilator columns
    columns = [(b + h * 1j).derivative().samples() for b, h in zip(basis, minus)]
    A = _stack_real(columns).T
    target = np.concatenate([Phi.samples().real, Phi.samples().imag])
    coeffs, *_ = lstsq(A, target)
    residual = target - A @ coeffs
    inf_side = float(np.sqrt(np.mean(residual[: grid.n_theta] ** 2 + residual[grid.n_theta:] ** 2)))

    # sup side: maximize a linear functional over the real span of traces
    traces = [(b + h * 1j) for b, h in zip(basis, plus)]
    traces += [BoundarySpectrum.from_modes({0: 1.0}, grid), BoundarySpectrum.from_modes({0: 1j}, grid)]
    samples = _stack_real([t.samples() for t in traces])
    gram = samples @ samples.T / grid.n_theta
    functional = np.array([duality_pair(Phi, t) for t in traces])
    sup_side = float(np.sqrt(max(functional @ lstsq(gram, functional)[0], 0.0)))
    return {"size": size, "inf": inf_side, "sup": sup_side, "gap": inf_side - sup_side}
