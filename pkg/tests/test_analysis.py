"""
Analysis Tests
Duality identities, density in L^p(I) and boundary behaviour.
"""

import numpy as np
import pytest

from src.analysis.boundary import SectorConfig, fatou_convergence, log_integral_diagnostic, nontangential_max
from src.analysis.columns import hilbert_columns, trig_basis
from src.analysis.density import ArcSplit, density_experiment, density_sobolev_experiment
from src.analysis.duality import adjoint_check, duality_pair, orthogonality_check
from src.coeff.coefficient import Coefficient
from src.grid.circle import BoundarySpectrum, CircleGrid
from src.grid.fields import DiskField
from src.grid.radial import RadialRule
from src.ops.boundary import conjugation_h0
from src.solver.config import SolveConfig

RADIAL_SIGMA = "1 + r**2/2"


@pytest.fixture(scope="module")
def grid():
    return CircleGrid(32)


@pytest.fixture(scope="module")
def rule():
    return RadialRule(4, 8)


@pytest.fixture(scope="module")
def cfg():
    return SolveConfig()


@pytest.fixture(scope="module")
def radial(grid, rule):
    return Coefficient.radial(RADIAL_SIGMA, grid, rule)


# ==================== COLUMNS / DUALITY ====================

def test_trig_basis_order_and_size(grid):
    basis = trig_basis(grid, 4)

    np.testing.assert_allclose(basis[0].samples(), np.cos(grid.theta), atol=1e-14)
    np.testing.assert_allclose(basis[3].samples(), np.sin(2 * grid.theta), atol=1e-14)
    with pytest.raises(ValueError):
        trig_basis(grid, 2 * grid.M + 1)


def test_hilbert_columns_for_zero_coefficient(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    basis = trig_basis(grid, 4)
    columns = hilbert_columns(basis, coef, cfg, threads=2)

    for phi, h in zip(basis, columns):
        np.testing.assert_allclose(h.coeffs, conjugation_h0(phi).coeffs, atol=1e-12)


def test_duality_pair_is_spectral_mean(grid):
    c = BoundarySpectrum.from_function(np.cos, grid)
    z = BoundarySpectrum.from_samples(grid.points, grid)

    assert duality_pair(c, c) == pytest.approx(0.5)
    # (1/2pi) int z * z d theta = 0
    assert duality_pair(z, z) == pytest.approx(0.0, abs=1e-15)


def test_adjoint_identities(cfg, radial):
    result = adjoint_check(radial, cfg, size=6, threads=1)

    assert result["size"] == 6
    assert result["symmetry_violation"] < 1e-6
    assert result["adjoint_violation"] < 1e-6
    assert result["hilbert_matrix"].shape == (6, 6)


def test_adjoint_check_rejects_oversized_basis(grid, rule, cfg):
    with pytest.raises(ValueError):
        adjoint_check(Coefficient.constant(0.0, grid, rule), cfg, size=2 * grid.M + 2)


def test_orthogonality_and_duality_gap(cfg, radial):
    result = orthogonality_check(radial, cfg, trials=2, rng=np.random.default_rng(11), degree=4, dual_size=4)

    assert result["max_pairing"] < 1e-6
    duality = result["duality"]
    assert duality["inf"] >= duality["sup"] - 1e-8
    assert duality["gap"] == pytest.approx(duality["inf"] - duality["sup"])


# ==================== DENSITY ====================

def test_arc_split_upper_semicircle(grid):
    split = ArcSplit.upper_semicircle(grid)

    # open arc (0, pi) on 32 points
    assert split.inside.sum() == 15
    assert not split.inside[0] and not split.inside[16]
    np.testing.assert_array_equal(split.outside, ~split.inside)
    np.testing.assert_array_equal(split.concatenate(np.ones(32), np.zeros(32)), split.inside.astype(float))


def test_arc_split_requires_complement(grid):
    with pytest.raises(ValueError):
        ArcSplit(grid, np.ones(grid.n_theta, dtype=bool))
    with pytest.raises(ValueError):
        ArcSplit(grid, np.ones(grid.n_theta + 1, dtype=bool))


def test_cutoff_vanishes_on_inside(grid):
    split = ArcSplit.upper_semicircle(grid)
    cutoff = split.cutoff()

    assert np.all(cutoff[split.inside] == 0.0)
    assert np.all((cutoff >= 0.0) & (cutoff <= 1.0))
    assert cutoff[24] == 1.0


def test_density_error_decreases(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    split = ArcSplit.upper_semicircle(grid)
    target = np.conj(grid.points)
    table = density_experiment(target, split, coef, cfg, schedule=(4, 8, 16), ridge=1e-14, threads=1)

    assert list(table.columns) == ["K", "error_I", "norm_J", "c"]
    assert list(table["K"]) == [4, 8, 16]
    assert table["error_I"].iloc[-1] < table["error_I"].iloc[0]
    assert np.all(np.diff(table["error_I"].to_numpy()) <= 1e-8)


def test_density_on_radial_coefficient(grid, cfg, radial):
    split = ArcSplit.from_arcs(grid, [(0.5, 2.5)])
    target = np.cos(grid.theta) - 1j * np.sin(2 * grid.theta)
    table = density_experiment(target, split, radial, cfg, schedule=(2, 6), ridge=1e-14, threads=2)

    assert table["error_I"].iloc[1] <= table["error_I"].iloc[0] + 1e-8


def test_density_schedule_validation(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    split = ArcSplit.upper_semicircle(grid)

    with pytest.raises(ValueError):
        density_experiment(np.zeros(grid.n_theta), split, coef, cfg, schedule=())
    with pytest.raises(ValueError):
        density_experiment(np.zeros(grid.n_theta), split, coef, cfg, schedule=(0, 4))
    with pytest.raises(ValueError):
        density_experiment(np.zeros(grid.n_theta), split, coef, cfg, schedule=(4 * grid.M,))


def test_density_sobolev_table(grid, rule, cfg):
    coef = Coefficient.constant(0.0, grid, rule)
    split = ArcSplit.upper_semicircle(grid)
    target = np.conj(grid.points)
    table = density_sobolev_experiment(target, split, coef, cfg, schedule=(4, 12), ridge=1e-14, threads=1)

    assert list(table.columns) == ["K", "error_I", "norm_J", "c"]
    assert np.all(np.isfinite(table["error_I"])) and np.all(table["error_I"] >= 0)
    assert np.all(np.isfinite(table["norm_J"]))


# ==================== BOUNDARY BEHAVIOUR ====================

def test_sector_config():
    sectors = SectorConfig(aperture=np.pi / 6, levels=4, angles=3)

    assert sectors.offsets.size == 12
    assert np.all(np.abs(sectors.offsets) < 1.0)
    assert np.all(sectors.contains(sectors.offsets))
    assert not sectors.contains(np.array([0.99j]))[0]
    with pytest.raises(ValueError):
        SectorConfig(aperture=np.pi / 2)


def test_nontangential_max_of_identity(grid, rule):
    f = DiskField.from_callable(lambda z: z, grid, rule)
    result = nontangential_max(f, SectorConfig(levels=6, angles=4), p=2.0)

    assert result.trace_norm == pytest.approx(1.0)
    assert 0.9 < result.ratio <= 1.0 + 1e-12
    assert result.values.shape == (grid.n_theta,)


def test_fatou_convergence_is_monotone(grid, rule):
    f = DiskField.from_callable(lambda z: z ** 2, grid, rule)
    table = fatou_convergence(f, p=2.0)

    assert table["decreasing"].all()
    # ||r^2 z^2 - z^2|| = 1 - r^2
    np.testing.assert_allclose(table["error"], 1 - table["r"] ** 2, atol=1e-10)


def test_log_integral_of_nonvanishing_function(grid, rule):
    f = DiskField.from_callable(lambda z: 2 + z, grid, rule)

    assert log_integral_diagnostic(f) == pytest.approx(np.log(2.0), rel=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
