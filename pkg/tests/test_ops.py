"""
Operator Tests
Boundary multipliers, area operators and traces.
"""

import numpy as np
import pytest

from src.grid.circle import BoundarySpectrum, CircleGrid
from src.grid.fields import DiskField
from src.grid.radial import RadialRule
from src.ops.area import beurling, cauchy_area, reflect_area
from src.ops.boundary import analytic_projection, cauchy_boundary, conjugation_h0
from src.ops.oracle import oracle_dense, singular_cell_bound
from src.ops.trace import best_trace, trace_at_boundary
from src.utils.errors import GridError, TraceError


@pytest.fixture
def grid():
    return CircleGrid(32)


@pytest.fixture
def rule():
    return RadialRule(4, 8)


def _samples(func, grid, rule):
    z = rule.nodes[:, None] * grid.points[None, :]
    return func(z)


def test_cauchy_boundary_extends_analytic_part(grid, rule):
    psi = BoundarySpectrum.from_function(lambda t: np.exp(2j * t) + np.exp(-1j * t), grid)
    F = cauchy_boundary(psi, rule)

    np.testing.assert_allclose(F.synthesize(), _samples(lambda z: z ** 2, grid, rule), atol=1e-13)
    np.testing.assert_allclose(F.boundary().samples(), grid.points ** 2, atol=1e-13)


def test_analytic_projection_drops_negative_modes(grid):
    psi = BoundarySpectrum.from_modes({-2: 1.0, 0: 3.0, 4: 2.0j}, grid)
    projected = analytic_projection(psi)

    assert projected.coeff(-2) == 0
    assert projected.coeff(0) == 3.0
    assert projected.coeff(4) == 2.0j


def test_conjugation_h0_of_cosine_is_sine(grid):
    phi = BoundarySpectrum.from_function(lambda t: np.cos(t) + 1.0, grid)
    h = conjugation_h0(phi)

    assert h.is_real_valued
    np.testing.assert_allclose(h.samples(), np.sin(grid.theta), atol=1e-14)


def test_conjugation_h0_rejects_complex_data(grid):
    with pytest.raises(ValueError):
        conjugation_h0(BoundarySpectrum.from_samples(grid.points, grid))


@pytest.mark.parametrize("w, expected", [
    (lambda z: np.ones_like(z), lambda z: np.conj(z)),
    (lambda z: z, lambda z: np.abs(z) ** 2 - 1),
    (lambda z: np.conj(z), lambda z: np.conj(z) ** 2 / 2),
])
def test_cauchy_area_closed_forms(grid, rule, w, expected):
    image = cauchy_area(DiskField.from_callable(w, grid, rule))

    np.testing.assert_allclose(image.synthesize(), _samples(expected, grid, rule), atol=1e-10)
    np.testing.assert_allclose(image.trace_samples(), expected(grid.points), atol=1e-10)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_cauchy_area_inverts_dzbar(grid, rule, seed):
    w = DiskField.random_polynomial(grid, rule, np.random.default_rng(seed))

    np.testing.assert_allclose(cauchy_area(w).dzbar().synthesize(), w.synthesize(), atol=1e-9)


def test_cauchy_area_high_mode_closed_form():
    # T(conj(z)^k) = conj(z)^(k+1) / (k+1)
    grid, rule = CircleGrid(64), RadialRule(8, 8)
    w = DiskField.from_callable(lambda z: np.conj(z) ** 12, grid, rule)

    image = cauchy_area(w)
    np.testing.assert_allclose(image.synthesize(), _samples(lambda z: np.conj(z) ** 13 / 13, grid, rule), atol=1e-7)
    np.testing.assert_allclose(image.trace_samples(), np.conj(grid.points) ** 13 / 13, atol=1e-10)


def test_cauchy_area_top_mode_stays_bounded():
    grid, rule = CircleGrid(128), RadialRule(4, 8)
    top = grid.M - 1
    w = DiskField.from_callable(lambda z: np.conj(z) ** top, grid, rule)

    profiles = cauchy_area(w).profiles
    assert np.all(np.isfinite(profiles))
    assert np.max(np.abs(profiles)) <= 2.0 / (top + 1)


def test_beurling_of_z_is_conj_z(grid, rule):
    image = beurling(DiskField.from_callable(lambda z: z, grid, rule))

    np.testing.assert_allclose(image.synthesize(), _samples(np.conj, grid, rule), atol=1e-10)


def test_reflect_area_variants(grid, rule):
    ones = DiskField.from_callable(lambda z: np.ones_like(z), grid, rule)
    plus = reflect_area(ones, "+")
    minus = reflect_area(ones, "minus")

    np.testing.assert_allclose(plus.synthesize(), -_samples(lambda z: z, grid, rule), atol=1e-12)
    np.testing.assert_allclose(minus.boundary().samples(), grid.points, atol=1e-12)
    with pytest.raises(ValueError):
        reflect_area(ones, "x")


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_oracle_dense_agrees_with_fast_transform(seed):
    grid, rule = CircleGrid(32), RadialRule(2, 8)
    sample = DiskField.random_polynomial(grid, rule, np.random.default_rng(seed))
    fast = cauchy_area(sample).synthesize()
    dense = oracle_dense(sample).synthesize()

    assert np.max(np.abs(fast - dense)) / np.max(np.abs(fast)) < 2e-2
    assert 0 < singular_cell_bound(sample) < np.max(np.abs(sample.synthesize()))


def test_random_polynomial_occupies_modes_up_to_degree(grid, rule):
    w = DiskField.random_polynomial(grid, rule, np.random.default_rng(7), degree=3)
    energy = np.abs(w.profiles).max(axis=1)

    assert all(energy[grid.index(n)] > 1e-8 for n in range(-3, 4))
    assert energy[grid.index(4)] < 1e-12
    assert energy[grid.index(-4)] < 1e-12


def test_oracle_dense_size_guard(rule):
    big = DiskField.zeros(CircleGrid(128), rule)

    with pytest.raises(GridError):
        oracle_dense(big)


def test_oracle_dense_rejects_unknown_operator():
    grid, rule = CircleGrid(16), RadialRule(2, 4)
    with pytest.raises(ValueError):
        oracle_dense(DiskField.zeros(grid, rule), which="S")


def test_trace_kinds(grid, rule):
    f = DiskField.from_callable(lambda z: z ** 2 + 1, grid, rule, with_trace=False)

    with pytest.raises(TraceError):
        trace_at_boundary(f, "cauchy_image")
    smooth = trace_at_boundary(f, "smooth")
    np.testing.assert_allclose(smooth.samples(), grid.points ** 2 + 1, atol=1e-10)
    np.testing.assert_allclose(best_trace(f).coeffs, smooth.coeffs)
    with pytest.raises(ValueError):
        trace_at_boundary(f, "nearest")


def test_extrapolation_growth_guard(grid, rule):
    profiles = np.zeros((grid.n_modes, rule.n_radial), dtype=complex)
    # alternating outer values blow up under polynomial extrapolation
    profiles[grid.index(0), -4:] = [1e-6, -1e-6, 1e-6, -1e-6]
    spiky = DiskField(profiles, grid, rule)

    with pytest.raises(TraceError):
        trace_at_boundary(spiky, "smooth", growth_bound=1.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
