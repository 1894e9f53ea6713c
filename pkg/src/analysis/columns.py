"""
Trigonometric bases and batched generalized-Hilbert columns.
"""

from typing import List, Optional

import numpy as np
from joblib import Parallel, delayed

from config.settings import settings
from ..coeff.coefficient import Coefficient
from ..grid.circle import BoundarySpectrum, CircleGrid
from ..solver.config import SolveConfig
from ..solver.dirichlet import hilbert_nu


def trig_basis(grid: CircleGrid, size: int) -> List[BoundarySpectrum]:
    """cos(theta), sin(theta), cos(2 theta), sin(2 theta), ... (size functions)."""
    if size > 2 * grid.M:
        raise ValueError(f"basis size {size} exceeds the {2 * grid.M} available trig functions")
    basis = []
    for j in range(size):
        k = j // 2 + 1
        if j % 2 == 0:
            basis.append(BoundarySpectrum.from_modes({k: 0.5, -k: 0.5}, grid, real=True))
        else:
            basis.append(BoundarySpectrum.from_modes({k: -0.5j, -k: 0.5j}, grid, real=True))
    return basis


def hilbert_columns(inputs: List[BoundarySpectrum], coef: Coefficient,
                    cfg: Optional[SolveConfig] = None, threads: Optional[int] = None) -> List[BoundarySpectrum]:
    """H_nu applied to every input; independent solves run on a thread pool."""
    cfg = cfg or SolveConfig.from_settings()
    n_jobs = threads or settings.THREADS
    if coef.is_constant or n_jobs == 1:
        return [hilbert_nu(phi, coef, cfg) for phi in inputs]
    return Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(hilbert_nu)(phi, coef, cfg) for phi in inputs
    )
