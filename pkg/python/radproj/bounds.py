# -*- coding: utf-8 -*-

# This code is part of radproj.
#
# (C) Copyright 2026 The radproj authors. All Rights Reserved.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Distortion tail-bound curves"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from logging import getLogger
from typing import Any, Mapping, Sequence

from .config import DEFAULT_QMAX
from .moments import centered_chi2_moments, distortion_moment_table, iid_average_moment

logger = getLogger(__name__)


class CurveMethod(str, Enum):
    """Producer of a tail curve."""

    SHARP = "sharp"
    ACHLIOPTAS = "achlioptas"
    SUBGAMMA = "subgamma"
    NOGO_LOWER = "nogo_lower"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TailCurve:
    """Points ``(eps, bound)`` of a tail curve, clipped to ``[0, 1]``."""

    method: CurveMethod
    m: int
    K: int | None
    points: tuple[tuple[float, float], ...]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        points = tuple((float(eps), float(bound)) for eps, bound in self.points)
        eps_values = [eps for eps, _ in points]
        if any(a >= b for a, b in zip(eps_values, eps_values[1:])):
            raise ValueError("points must be sorted by strictly increasing eps")
        if any(not 0.0 <= bound <= 1.0 for _, bound in points):
            raise ValueError("bounds must lie in [0, 1]")
        object.__setattr__(self, "method", CurveMethod(self.method))
        object.__setattr__(self, "points", points)

    @property
    def eps_grid(self) -> list[float]:
        """The eps coordinates."""
        return [eps for eps, _ in self.points]

    @property
    def values(self) -> list[float]:
        """The bound coordinates."""
        return [bound for _, bound in self.points]

    @property
    def label(self) -> str:
        """Column label, ``sharp_<K>`` for sharp curves."""
        if self.method == CurveMethod.SHARP:
            return f"sharp_{self.K}"
        return self.method.value


@dataclass(frozen=True)
class MomentBound:
    """Outcome of the even-order Markov optimisation."""

    value: float
    """Bound clipped to ``[0, 1]``."""

    order: int
    """Smallest even order attaining the minimum."""

    raw: float
    """Unclipped minimum."""


def check_eps_grid(eps_grid: Sequence) -> list:
    """Validate a nonempty, positive, strictly increasing eps grid."""
    grid = list(eps_grid)
    if not grid:
        raise ValueError("eps grid must be nonempty")
    if any(eps <= 0 for eps in grid):
        raise ValueError("eps grid must be positive")
    if any(a >= b for a, b in zip(grid, grid[1:])):
        raise ValueError("eps grid must be strictly increasing")
    return grid


def _clip(value: float) -> float:
    return min(1.0, max(0.0, value))


def _check_qmax(qmax: int) -> None:
    if qmax < 2 or qmax % 2 != 0:
        raise ValueError(f"qmax must be an even integer >= 2, got {qmax}")


def _float_ratio(value: float, eps: float, q: int) -> float:
    """Return ``value / eps^q`` through logarithms, so tiny eps cannot underflow to 0."""
    if value <= 0.0:
        return 0.0
    try:
        return math.exp(math.log(value) - q * math.log(eps))
    except OverflowError:
        return math.inf


def moment_bound(moments_by_order: Mapping[int, Any], eps) -> MomentBound:
    """Return ``min_q E[X^q] / eps^q`` over the even orders supplied.

    Exact moments are divided exactly; floating moments in floating point.

    Args:
        moments_by_order: Map order -> q-th moment; odd orders are ignored.
        eps: Positive threshold.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    best = None
    best_order = None
    for q in sorted(moments_by_order):
        if q < 2 or q % 2 != 0:
            continue
        value = moments_by_order[q]
        if isinstance(value, (Fraction, int)):
            candidate = Fraction(value) / Fraction(eps) ** q
        else:
            candidate = _float_ratio(float(value), float(eps), q)
        if best is None or candidate < best:
            best, best_order = candidate, q
    if best is None:
        raise ValueError("no even moment order available")
    try:
        raw = float(best)
    except OverflowError:
        raw = math.inf
    return MomentBound(value=_clip(raw), order=best_order, raw=raw)


def sharp_moment_bound(
    m: int, K: int, eps, qmax: int = DEFAULT_QMAX, exact: bool | None = None
) -> MomentBound:
    """Markov bound from the extreme distortion moments ``nu_2..nu_qmax``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_qmax(qmax)
    table = distortion_moment_table(m, K, qmax, exact)
    result = moment_bound(table.even_orders(), eps)
    logger.debug("sharp bound: m=%s K=%s eps=%s q=%s", m, K, eps, result.order)
    return result


def sharp_tail_bound(m: int, K: int, eps, qmax: int = DEFAULT_QMAX, exact: bool | None = None) -> float:
    """Return the sharp bound on ``P[|E(x)| > eps]`` for K-sparse inputs.

    Args:
        m: Number of projection rows.
        K: Sparsity of the input.
        eps: Positive threshold.
        qmax: Largest even moment order tried.
        exact: Force exact or floating moment tables; automatic when ``None``.

    Returns:
        float: ``min(1, min_q nu_q / eps^q)`` over even ``q <= qmax``.
    """
    return sharp_moment_bound(m, K, eps, qmax, exact).value


def _two_exp(exponent: float) -> float:
    """Return ``2 exp(exponent)``, infinite once it leaves the float range."""
    try:
        return 2.0 * math.exp(exponent)
    except OverflowError:
        return math.inf


def _achlioptas_raw(m: int, eps: float) -> float:
    # positive exponent for eps > 3/2
    return _two_exp(-(m * eps * eps / 4.0) * (1.0 - 2.0 * eps / 3.0))


def _subgamma_raw(m: int, eps: float) -> float:
    return _two_exp(-m * eps * eps / (4.0 + 4.0 * eps))


def _nogo_raw(m: int, eps: float) -> float:
    return _two_exp(-m * eps * eps / 4.0)


def _check_positive(m: int, eps) -> float:
    if m < 1:
        raise ValueError("m must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return float(eps)


def achlioptas_bound(m: int, eps) -> float:
    """Return ``2 exp(-(m eps^2 / 4)(1 - 2 eps / 3))`` clipped to ``[0, 1]``."""
    return _clip(_achlioptas_raw(m, _check_positive(m, eps)))


def subgamma_bound(m: int, eps) -> float:
    """Return ``2 exp(-m eps^2 / (4 + 4 eps))`` clipped to ``[0, 1]``.

    This is the sub-gamma tail of ``(chi2_m - m) / m`` with variance factor
    ``2m`` and scale ``2``.
    """
    return _clip(_subgamma_raw(m, _check_positive(m, eps)))


def nogo_lower_curve(m: int, eps) -> float:
    """Return ``2 exp(-m eps^2 / 4)`` clipped to ``[0, 1]``.

    Asymptotic lower reference with the vanishing correction dropped; never
    a guarantee.
    """
    return _clip(_nogo_raw(m, _check_positive(m, eps)))


def gaussian_chi2_moment_bound(m: int, eps, qmax: int = DEFAULT_QMAX) -> MomentBound:
    """Markov bound from the exact moments of ``(chi2_m - m) / m``.

    Gaussian rows give the distortion ``(1/m) sum (N_i^2 - 1)``; its moments
    dominate the Rademacher ones, and so does this bound.
    """
    if m < 1:
        raise ValueError("m must be positive")
    _check_qmax(qmax)
    chi2 = centered_chi2_moments(qmax)
    moments = {q: iid_average_moment(chi2, m, q) for q in range(2, qmax + 1, 2)}
    return moment_bound(moments, eps)


def compare_curves(
    m: int, K: int, eps_grid: Sequence, qmax: int = DEFAULT_QMAX, exact: bool | None = None
) -> list[TailCurve]:
    """Evaluate the sharp, Achlioptas, sub-gamma and no-go curves on one grid.

    Args:
        m: Number of projection rows.
        K: Input sparsity for the sharp curve.
        eps_grid: Nonempty, positive, strictly increasing thresholds.
        qmax: Largest even moment order for the sharp curve.
        exact: Moment-table mode for the sharp curve.

    Returns:
        list[TailCurve]: curves in the order sharp, achlioptas, subgamma, nogo_lower.
    """
    grid = check_eps_grid(eps_grid)
    _check_qmax(qmax)
    table = distortion_moment_table(m, K, qmax, exact)
    sharp = [moment_bound(table.even_orders(), eps) for eps in grid]
    curves = [
        TailCurve(
            CurveMethod.SHARP,
            m,
            K,
            tuple((eps, b.value) for eps, b in zip(grid, sharp)),
            {
                "qmax": qmax,
                "exact": table.exact,
                "orders": [b.order for b in sharp],
                "raw": [b.raw for b in sharp],
            },
        )
    ]
    for method, raw_fn, extra in (
        (CurveMethod.ACHLIOPTAS, _achlioptas_raw, {}),
        (CurveMethod.SUBGAMMA, _subgamma_raw, {"variance_factor": 2 * m, "scale": 2}),
        (CurveMethod.NOGO_LOWER, _nogo_raw, {"asymptotic": True}),
    ):
        raw = [raw_fn(m, float(eps)) for eps in grid]
        curves.append(
            TailCurve(
                method,
                m,
                None,
                tuple((eps, _clip(r)) for eps, r in zip(grid, raw)),
                {"raw": raw, **extra},
            )
        )
    return curves
