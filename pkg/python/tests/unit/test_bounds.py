"""Tests for the tail-bound curves."""

import math
from fractions import Fraction

import pytest

from radproj.bounds import (
    CurveMethod,
    MomentBound,
    TailCurve,
    achlioptas_bound,
    check_eps_grid,
    compare_curves,
    gaussian_chi2_moment_bound,
    moment_bound,
    nogo_lower_curve,
    sharp_moment_bound,
    sharp_tail_bound,
    subgamma_bound,
)

GRID = [Fraction(k, 10) for k in range(1, 11)]


def test_sharp_bound_vanishes_for_one_sparse_inputs():
    """With K = 1 every moment is zero."""
    assert sharp_tail_bound(10, 1, 0.1) == 0.0


def test_sharp_bound_of_sign_law():
    """For K = 2, m = 1 the distortion is +-1 and all even moments are 1."""
    result = sharp_moment_bound(1, 2, 2, qmax=32)
    assert result == MomentBound(value=2.0**-32, order=32, raw=2.0**-32)
    assert sharp_tail_bound(1, 2, Fraction(1, 2)) == 1.0
    assert sharp_moment_bound(1, 2, Fraction(1, 2)).order == 2


def test_sharp_bound_validation():
    """eps must be positive and qmax even."""
    with pytest.raises(ValueError):
        sharp_tail_bound(10, 4, 0)
    with pytest.raises(ValueError, match="even"):
        sharp_tail_bound(10, 4, 0.5, qmax=7)


def test_moment_bound_prefers_smallest_order_on_ties():
    """Ties keep the lowest even order and odd orders are skipped."""
    result = moment_bound({3: Fraction(0), 2: Fraction(1), 4: Fraction(1)}, 1)
    assert result.order == 2
    assert result.value == 1.0
    with pytest.raises(ValueError, match="no even moment"):
        moment_bound({3: 1}, 1)
    with pytest.raises(ValueError):
        moment_bound({2: 1}, 0)


def test_moment_bound_float_and_overflow():
    """Float moments stay float, huge exact values clip to 1."""
    assert moment_bound({2: 0.5, 4: 0.5}, 2.0).order == 4
    huge = moment_bound({2: Fraction(10) ** 400}, 1)
    assert math.isinf(huge.raw)
    assert huge.value == 1.0


def test_moment_bound_float_with_tiny_eps():
    """eps^q below the float range still gives a finite minimum, clipped to 1."""
    result = moment_bound({2: 1.0, 64: 1.0}, 1e-12)
    assert result.order == 2
    assert result.raw == pytest.approx(1e24, rel=1e-9)
    assert result.value == 1.0
    assert moment_bound({2: 0.0, 4: 1.0}, 1e-200).raw == 0.0
    assert sharp_tail_bound(10, 20000, 1e-12) == 1.0


@pytest.mark.parametrize("eps", [2, 10])
def test_reference_curves_for_large_eps(eps):
    """Large thresholds clip to 1 where the Achlioptas exponent turns positive."""
    assert achlioptas_bound(1000, eps) == 1.0
    assert 0.0 <= subgamma_bound(1000, eps) <= 1.0
    assert 0.0 <= nogo_lower_curve(1000, eps) <= 1.0
    curves = compare_curves(1000, 4, [eps], qmax=8)
    achlioptas = next(c for c in curves if c.method == CurveMethod.ACHLIOPTAS)
    assert achlioptas.values == [1.0]
    assert achlioptas.metadata["raw"][0] > 1.0


def test_achlioptas_values():
    """Direct evaluation of the closed form."""
    assert achlioptas_bound(100, 0.5) == pytest.approx(0.03101, abs=1e-5)
    assert achlioptas_bound(1, 1) == 1.0
    assert achlioptas_bound(50, 1e-9) == 1.0


def test_subgamma_values():
    """Sub-gamma chi-square tail with variance factor 2m and scale 2."""
    assert subgamma_bound(100, 0.5) == pytest.approx(2 * math.exp(-25 / 6))
    assert subgamma_bound(100, 0.5) == pytest.approx(0.03100, abs=1e-5)
    assert subgamma_bound(100, 1) == pytest.approx(7.45e-6, rel=1e-2)
    assert subgamma_bound(10, 1e-9) == 1.0


def test_nogo_values():
    """Asymptotic lower reference without the vanishing correction."""
    assert nogo_lower_curve(100, 0.5) == pytest.approx(3.86e-3, rel=1e-3)
    assert nogo_lower_curve(400, 0.1) == pytest.approx(0.7358, abs=1e-4)
    assert nogo_lower_curve(10, 1e-9) == 1.0


@pytest.mark.parametrize("fn", [achlioptas_bound, subgamma_bound, nogo_lower_curve])
def test_reference_curves_validate_arguments(fn):
    """m and eps must be positive."""
    with pytest.raises(ValueError):
        fn(0, 0.5)
    with pytest.raises(ValueError):
        fn(10, -0.5)


@pytest.mark.parametrize("m", [10, 100])
@pytest.mark.parametrize("K", [64, 256, 1024])
def test_sharp_bound_dominates_prior_bounds(m, K):
    """The sharp bound is never above the Achlioptas and sub-gamma bounds."""
    for eps in GRID:
        sharp = sharp_tail_bound(m, K, eps, qmax=32)
        for reference in (achlioptas_bound(m, eps), subgamma_bound(m, eps)):
            assert sharp <= reference or math.isclose(sharp, reference, rel_tol=1e-12)


@pytest.mark.parametrize("K", [2, 10, 64])
def test_sharp_bound_monotone_in_eps_and_m(K):
    """More rows and larger thresholds never raise the bound."""
    for m in (1, 5, 20):
        values = [sharp_tail_bound(m, K, eps, qmax=16) for eps in GRID]
        assert all(a >= b for a, b in zip(values, values[1:]))
    for eps in GRID:
        by_rows = [sharp_tail_bound(m, K, eps, qmax=16) for m in (1, 5, 20)]
        assert all(a >= b for a, b in zip(by_rows, by_rows[1:]))


def test_sharp_bound_exact_and_float_agree(fresh_tables):
    """Both moment-table paths give the same bound."""
    for eps in (0.2, 0.5, 0.9):
        exact = sharp_tail_bound(10, 40, eps, qmax=16, exact=True)
        approx = sharp_tail_bound(10, 40, eps, qmax=16, exact=False)
        assert approx == pytest.approx(exact, rel=1e-9)


def test_gaussian_bound_is_weaker_than_sharp():
    """Chi-square moments dominate the Rademacher ones, so the bound does too."""
    for eps in GRID:
        assert sharp_tail_bound(3, 10, eps, qmax=8) <= gaussian_chi2_moment_bound(3, eps, 8).value
    with pytest.raises(ValueError):
        gaussian_chi2_moment_bound(0, 0.5)


def test_compare_curves_shape():
    """One curve per method over the same grid, in fixed order."""
    grid = [0.2, 0.5, 0.8]
    curves = compare_curves(100, 256, grid, qmax=32)
    assert [c.method for c in curves] == [
        CurveMethod.SHARP,
        CurveMethod.ACHLIOPTAS,
        CurveMethod.SUBGAMMA,
        CurveMethod.NOGO_LOWER,
    ]
    assert [c.label for c in curves] == ["sharp_256", "achlioptas", "subgamma", "nogo_lower"]
    assert all(c.eps_grid == grid for c in curves)
    sharp, achlioptas, subgamma, nogo = curves
    assert sharp.metadata["qmax"] == 32
    assert sharp.metadata["exact"] is True
    assert len(sharp.metadata["orders"]) == 3
    assert subgamma.metadata["variance_factor"] == 200
    assert subgamma.metadata["scale"] == 2
    assert nogo.metadata["asymptotic"] is True
    assert all(a >= b for a, b in zip(sharp.values, sharp.values[1:]))
    assert sharp.values[1] <= achlioptas.values[1]


def test_compare_curves_one_sparse():
    """K = 1 gives an identically zero sharp curve."""
    sharp, *others = compare_curves(10, 1, [1.0])
    assert sharp.values == [0.0]
    assert all(c.values[0] > 0 for c in others)


@pytest.mark.parametrize("grid", [[], [0.0, 0.5], [0.5, 0.5], [0.6, 0.2]])
def test_eps_grid_validation(grid):
    """Grids must be nonempty, positive and strictly increasing."""
    with pytest.raises(ValueError):
        check_eps_grid(grid)


def test_tail_curve_validation():
    """Curves keep sorted points within [0, 1]."""
    curve = TailCurve("empirical", 10, 4, ((0.1, 0.5), (0.2, 0.25)))
    assert curve.method is CurveMethod.EMPIRICAL
    assert curve.label == "empirical"
    with pytest.raises(ValueError, match="sorted"):
        TailCurve(CurveMethod.EMPIRICAL, 10, 4, ((0.2, 0.5), (0.1, 0.25)))
    with pytest.raises(ValueError, match=r"\[0, 1\]"):
        TailCurve(CurveMethod.SHARP, 10, 4, ((0.1, 1.5),))
