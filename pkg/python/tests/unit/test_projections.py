"""Tests for projection sampling and Monte Carlo distortion estimates."""

import math

import numpy as np
import pytest

from radproj import projections
from radproj.bounds import CurveMethod, sharp_tail_bound
from radproj.majorization import WeightProfile
from radproj.moments import distortion_moment, sparse_distortion_moment
from radproj.projections import (
    SWEEP_QUANTILES,
    DistortionSample,
    Scheme,
    dataset_distortion_sweep,
    distortion,
    empirical_ccdf,
    flat_vector,
    sample_matrix,
    scheme_for_density,
    simulate_distortion,
    spread_vector,
    trial_seed,
)


def test_scheme_parsing():
    """Shorthands and full names both parse."""
    assert Scheme.parse("dense") is Scheme.DENSE
    assert Scheme.parse("sparse_rademacher") is Scheme.SPARSE
    assert Scheme.parse(Scheme.SPARSE) is Scheme.SPARSE
    assert scheme_for_density(1.0) is Scheme.DENSE
    assert scheme_for_density(0.3) is Scheme.SPARSE
    with pytest.raises(ValueError):
        Scheme.parse("gaussian")


def test_trial_seed_is_deterministic():
    """Substream seeds depend only on the base seed and the path."""
    assert trial_seed(7, 3) == trial_seed(7, 3)
    assert trial_seed(7, 3) != trial_seed(7, 4)
    assert trial_seed(7, 1, 0) != trial_seed(7, 0, 1)
    assert 0 <= trial_seed(0, 0) < 2**64


def test_matrix_is_reproducible():
    """Identical arguments give bit-identical matrices."""
    a = sample_matrix(16, 100, "dense", 1.0, seed=5)
    b = sample_matrix(16, 100, "dense", 1.0, seed=5)
    c = sample_matrix(16, 100, "dense", 1.0, seed=6)
    assert np.array_equal(a.signs, b.signs)
    assert not np.array_equal(a.signs, c.signs)


def test_dense_entries():
    """Dense entries are +-1/sqrt(m) with balanced signs."""
    matrix = sample_matrix(200, 300, Scheme.DENSE, seed=1)
    assert matrix.signs.shape == (200, 300)
    assert set(np.unique(matrix.signs).tolist()) == {-1.0, 1.0}
    assert matrix.scale == pytest.approx(1 / math.sqrt(200))
    assert np.allclose(np.abs(matrix.entries), matrix.scale)
    # 60000 fair signs: 4 standard deviations of the mean is about 0.016
    assert abs(matrix.signs.mean()) < 0.02


def test_sparse_entries_follow_density():
    """About a fraction p of sparse entries is nonzero, split evenly by sign."""
    p = 0.1
    matrix = sample_matrix(200, 500, Scheme.SPARSE, p, seed=2)
    signs = matrix.signs
    total = signs.size
    nonzero = np.count_nonzero(signs) / total
    assert abs(nonzero - p) < 4 * math.sqrt(p * (1 - p) / total)
    positive = np.count_nonzero(signs > 0) / total
    assert abs(positive - p / 2) < 4 * math.sqrt((p / 2) * (1 - p / 2) / total)
    assert matrix.scale == pytest.approx(1 / math.sqrt(200 * p))


@pytest.mark.parametrize("scheme, p", [(Scheme.DENSE, 1.0), (Scheme.SPARSE, 0.3)])
def test_row_blocks_do_not_change_entries(monkeypatch, scheme, p):
    """Generating one row per block gives the same matrix as a single block."""
    expected = sample_matrix(12, 70, scheme, p, seed=9).signs
    monkeypatch.setattr(projections, "_BLOCK_ENTRIES", 64)
    assert np.array_equal(sample_matrix(12, 70, scheme, p, seed=9).signs, expected)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"m": 0, "n": 4},
        {"m": 4, "n": 0},
        {"m": 4, "n": 4, "scheme": Scheme.DENSE, "p": 0.5},
        {"m": 4, "n": 4, "scheme": Scheme.SPARSE, "p": 0.0},
        {"m": 4, "n": 4, "scheme": Scheme.SPARSE, "p": 1.5},
    ],
)
def test_invalid_matrices(kwargs):
    """Dimensions, densities and the dense density are validated."""
    with pytest.raises(ValueError):
        sample_matrix(**kwargs)


def test_distortion_matches_dense_product():
    """The support-only product equals the full matrix product."""
    matrix = sample_matrix(30, 40, Scheme.SPARSE, 0.5, seed=3)
    x = spread_vector(40, 10, 0.8)
    y = matrix.entries @ x
    assert distortion(matrix, x) == pytest.approx(float(y @ y) / float(x @ x) - 1.0, abs=1e-12)
    assert distortion(matrix, 3 * x) == pytest.approx(distortion(matrix, x), abs=1e-12)


def test_distortion_validation():
    """Zero vectors and wrong lengths are rejected."""
    matrix = sample_matrix(4, 5, seed=0)
    with pytest.raises(ValueError, match="zero vector"):
        distortion(matrix, np.zeros(5))
    with pytest.raises(ValueError, match="does not match"):
        distortion(matrix, np.ones(4))


def test_simulation_matches_explicit_matrices():
    """Trial t reuses the matrix seeded with trial_seed(seed, t)."""
    x = spread_vector(20, 6, 0.7)
    sample = simulate_distortion(x, 8, Scheme.SPARSE, 0.4, trials=3, seed=11)
    for t in range(3):
        matrix = sample_matrix(8, 20, Scheme.SPARSE, 0.4, trial_seed(11, t))
        assert sample.values[t] == pytest.approx(distortion(matrix, x), abs=1e-12)


def test_simulation_independent_of_workers():
    """Thread count does not change results or their order."""
    x = flat_vector(30, 10)
    single = simulate_distortion(x, 5, trials=40, seed=4, workers=1)
    threaded = simulate_distortion(x, 5, trials=40, seed=4, workers=4)
    assert np.array_equal(single.values, threaded.values)


def test_simulation_metadata():
    """Samples record the instance they came from."""
    sample = simulate_distortion(3 * flat_vector(10, 4), 6, "sparse", 0.5, trials=5, seed=2)
    assert sample.trials == 5
    assert (sample.m, sample.n, sample.K) == (6, 10, 4)
    assert sample.norm == pytest.approx(3.0)
    assert sample.scheme is Scheme.SPARSE
    assert sample.p == 0.5


@pytest.mark.parametrize(
    "x, kwargs",
    [
        (np.zeros(4), {}),
        (np.ones(4), {"m": 0}),
        (np.ones(4), {"trials": 0}),
        (np.ones(4), {"scheme": Scheme.DENSE, "p": 0.5}),
    ],
)
def test_simulation_validation(x, kwargs):
    """Invalid simulation parameters are rejected."""
    arguments = {"m": 4, "trials": 2, **kwargs}
    with pytest.raises(ValueError):
        simulate_distortion(x, **arguments)


def test_one_sparse_input_never_distorts():
    """Dense projections preserve the norm of 1-sparse inputs."""
    x = np.zeros(25)
    x[7] = -3.0
    sample = simulate_distortion(x, 10, trials=10_000, seed=1)
    assert np.max(np.abs(sample.values)) <= 1e-12


def test_two_sparse_single_row_is_a_sign():
    """With K = 2 and one row the distortion is +-1."""
    curve = empirical_ccdf(2, 2, 1, trials=2000, eps_grid=[0.5, 1.5], seed=3)
    assert curve.values == [1.0, 0.0]


@pytest.mark.parametrize("p", [1.0, 0.1])
def test_second_moment_matches_theory(p):
    """Sampled second moments match the exact sparse-projection moment."""
    m = 10
    x = flat_vector(4, 4)
    sample = simulate_distortion(x, m, scheme_for_density(p), p, trials=4000, seed=12)
    expected = float(sparse_distortion_moment(m, p, WeightProfile.flat(4)))
    assert abs(sample.mean()) < 5 * sample.standard_error()
    assert abs(sample.second_moment() - expected) < 5 * sample.standard_error(2)


def test_sparse_scheme_is_more_spread():
    """Sparser projections distort flat inputs more."""
    x = flat_vector(4, 4)
    dense = simulate_distortion(x, 10, Scheme.DENSE, 1.0, trials=4000, seed=8)
    sparse = simulate_distortion(x, 10, Scheme.SPARSE, 0.1, trials=4000, seed=8)
    assert sparse.second_moment() > dense.second_moment()


def test_distortion_sample_statistics():
    """Summary statistics of a fixed sample."""
    sample = DistortionSample(
        values=np.array([-0.5, 0.2, 0.3, -0.1]),
        m=1,
        n=4,
        K=4,
        norm=1.0,
        scheme=Scheme.DENSE,
        p=1.0,
        seed=0,
    )
    assert sample.mean() == pytest.approx(-0.025)
    assert sample.second_moment() == pytest.approx(0.0975)
    assert sample.ccdf([0.15, 0.4]) == [0.75, 0.25]
    assert sample.quantiles([0.5]) == [pytest.approx(0.25)]
    single = DistortionSample(np.array([0.1]), 1, 1, 1, 1.0, Scheme.DENSE, 1.0, 0)
    assert math.isinf(single.standard_error())


def test_empirical_ccdf_curve():
    """Empirical curves are non-increasing and carry their parameters."""
    grid = [0.1, 0.3, 0.5, 0.7]
    curve = empirical_ccdf(20, 5, 4, Scheme.SPARSE, 0.5, trials=500, eps_grid=grid, seed=6)
    assert curve.method is CurveMethod.EMPIRICAL
    assert curve.K == 5
    assert curve.eps_grid == grid
    assert all(a >= b for a, b in zip(curve.values, curve.values[1:]))
    assert curve.metadata == {"trials": 500, "seed": 6, "scheme": "sparse_rademacher", "p": 0.5, "n": 20}
    with pytest.raises(ValueError):
        empirical_ccdf(20, 5, 4, eps_grid=[])


def test_flat_and_spread_vectors():
    """Helper vectors have unit norm and the requested support."""
    flat = flat_vector(6, 3)
    assert np.count_nonzero(flat) == 3
    assert float(flat @ flat) == pytest.approx(1.0)
    spread = spread_vector(6, 4, 0.5)
    assert np.count_nonzero(spread) == 4
    assert float(spread @ spread) == pytest.approx(1.0)
    assert spread[0] == pytest.approx(2 * spread[1])
    with pytest.raises(ValueError):
        flat_vector(3, 4)
    with pytest.raises(ValueError):
        spread_vector(6, 4, 0.0)


def test_dataset_sweep():
    """Zero columns are skipped, rows follow (column, density) order."""
    e1 = np.zeros(4)
    e1[0] = 2.0
    columns = [np.zeros(4), flat_vector(4, 4), e1]
    sweep = dataset_distortion_sweep(columns, 6, densities=(1.0, 0.5), trials=200, seed=3)
    assert sweep.skipped == 1
    assert [(r.column, r.p) for r in sweep.rows] == [(1, 1.0), (1, 0.5), (2, 1.0), (2, 0.5)]
    assert [r.scheme for r in sweep.rows] == [Scheme.DENSE, Scheme.SPARSE] * 2
    assert [r.K for r in sweep.rows] == [4, 4, 1, 1]
    for row in sweep.rows:
        assert len(row.quantiles) == len(SWEEP_QUANTILES)
        assert list(row.quantiles) == sorted(row.quantiles)
        assert row.mean_abs <= row.rms + 1e-15
    assert sweep.rows[2].rms <= 1e-12

    reference = simulate_distortion(
        columns[1], 6, Scheme.SPARSE, 0.5, trials=200, seed=trial_seed(3, 1, 1)
    )
    assert sweep.rows[1].rms == pytest.approx(math.sqrt(reference.second_moment()))


def test_dataset_sweep_of_zero_columns_fails():
    """A dataset with no nonzero column has nothing to simulate."""
    with pytest.raises(ValueError, match="all columns are zero"):
        dataset_distortion_sweep([np.zeros(3)], 4, trials=10)


@pytest.mark.slow
def test_monte_carlo_agrees_with_sharp_moments():
    """Flat K = 50 input: second moment near nu_2 and tails under the sharp bound."""
    trials = 100_000
    m, K = 10, 50
    sample = simulate_distortion(flat_vector(50, K), m, trials=trials, seed=2024)
    expected = float(distortion_moment(m, K, 2))
    assert expected == pytest.approx(0.196)
    assert abs(sample.second_moment() - expected) < 4 * sample.standard_error(2)
    grid = [k / 10 for k in range(1, 11)]
    slack = 4 * math.sqrt(0.25 / trials)
    for eps, observed in zip(grid, sample.ccdf(grid)):
        assert observed <= sharp_tail_bound(m, K, eps, qmax=32) + slack
