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

"""Squared-weight profiles and the majorization order"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from logging import getLogger
from math import isqrt
from numbers import Rational
from typing import Iterable, Sequence

logger = getLogger(__name__)


def as_fraction(value) -> Fraction:
    """Return ``value`` as an exact rational, embedding floats bit-exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    # numpy scalars and the like
    return Fraction(float(value))


def _rational_sqrt(value: Fraction) -> Fraction | None:
    """Return the exact rational square root of ``value`` or ``None``."""
    num_root = isqrt(value.numerator)
    den_root = isqrt(value.denominator)
    if num_root * num_root == value.numerator and den_root * den_root == value.denominator:
        return Fraction(num_root, den_root)
    return None


@dataclass(frozen=True)
class WeightProfile:
    """Nonnegative squared weights ``(x_i**2)`` of an input vector.

    Weights are exact rationals, so totals and majorization comparisons are
    decided without rounding.
    """

    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) == 0:
            raise ValueError("empty vector")
        weights = tuple(as_fraction(w) for w in self.weights)
        if any(w < 0 for w in weights):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_vector(cls, x: Sequence) -> WeightProfile:
        """Square a rational vector into a profile.

        Args:
            x: Vector components, ints, fractions, decimal strings or floats.

        Returns:
            WeightProfile: the profile ``(x_i**2)``.
        """
        if len(x) == 0:
            raise ValueError("empty vector")
        return cls(tuple(as_fraction(v) ** 2 for v in x))

    @classmethod
    def from_floats(cls, x: Iterable[float]) -> WeightProfile:
        """Square a floating-point vector after exact binary-fraction embedding."""
        values = [Fraction(float(v)) for v in x]
        return cls.from_vector(values)

    @classmethod
    def from_weights(cls, weights: Iterable) -> WeightProfile:
        """Build a profile directly from squared weights."""
        return cls(tuple(weights))

    @classmethod
    def flat(cls, sparsity: int, total=1, dimension: int | None = None) -> WeightProfile:
        """Return the flat profile with ``sparsity`` equal weights summing to ``total``."""
        if sparsity < 1:
            raise ValueError("sparsity must be positive")
        dimension = sparsity if dimension is None else dimension
        if dimension < sparsity:
            raise ValueError("dimension smaller than sparsity")
        share = as_fraction(total) / sparsity
        return cls((share,) * sparsity + (Fraction(0),) * (dimension - sparsity))

    @property
    def dimension(self) -> int:
        """Number of coordinates n."""
        return len(self.weights)

    def total(self) -> Fraction:
        """Squared norm ``sum(x_i**2)``."""
        return sum(self.weights, Fraction(0))

    def sparsity(self) -> int:
        """Number K of strictly positive weights."""
        return sum(1 for w in self.weights if w > 0)

    def support(self) -> tuple[int, ...]:
        """Indices of the strictly positive weights."""
        return tuple(i for i, w in enumerate(self.weights) if w > 0)

    def support_weights(self) -> tuple[Fraction, ...]:
        """Strictly positive weights in index order."""
        return tuple(w for w in self.weights if w > 0)

    def sorted_weights(self) -> tuple[Fraction, ...]:
        """Non-increasing rearrangement, ties kept in index order."""
        return tuple(sorted(self.weights, reverse=True))

    def padded(self, dimension: int) -> WeightProfile:
        """Append zero weights up to ``dimension``."""
        if dimension < self.dimension:
            raise ValueError("cannot pad to a smaller dimension")
        return WeightProfile(self.weights + (Fraction(0),) * (dimension - self.dimension))

    def is_flat(self) -> bool:
        """True when all support weights are equal."""
        return len(set(self.support_weights())) <= 1

    def amplitudes(self) -> tuple[Fraction, tuple[Fraction, ...]] | None:
        """Common-scale amplitudes ``x_i = sqrt(c) * t_i`` with rational ``c`` and ``t_i``.

        Exists exactly when all ratios of support weights are rational squares.
        The quadratic chaos then takes the rational values
        ``c * sum_{i != j} t_i t_j r_i r_j``.

        Returns:
            ``(c, t)`` with ``t`` aligned to ``weights`` (zeros off the support),
            or ``None`` when the support spans several square classes.
        """
        support = self.support_weights()
        if not support:
            return None
        scale = support[0]
        amplitudes = []
        for weight in self.weights:
            if weight == 0:
                amplitudes.append(Fraction(0))
                continue
            root = _rational_sqrt(weight / scale)
            if root is None:
                return None
            amplitudes.append(root)
        return scale, tuple(amplitudes)

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) for w in self.weights) + ")"


def lorenz_gaps(a: WeightProfile, b: WeightProfile) -> list[Fraction]:
    """Partial-sum differences of the non-increasing rearrangements of ``a`` and ``b``.

    Shorter profiles are zero-padded, which leaves majorization unchanged.
    """
    dimension = max(a.dimension, b.dimension)
    sums_a = accumulate(a.padded(dimension).sorted_weights())
    sums_b = accumulate(b.padded(dimension).sorted_weights())
    return [sa - sb for sa, sb in zip(sums_a, sums_b)]


def majorizes(a: WeightProfile, b: WeightProfile) -> bool:
    """Return True iff ``b`` is majorized by ``a`` (``b`` is more balanced).

    Args:
        a: Candidate dominating profile.
        b: Candidate dominated profile.

    Returns:
        bool: whether every partial sum of sorted ``a`` bounds that of sorted ``b``.
    """
    if a.total() != b.total():
        raise ValueError("incomparable: totals differ")
    return all(gap >= 0 for gap in lorenz_gaps(a, b))


def robin_hood(p: WeightProfile, i: int, j: int, eps) -> WeightProfile:
    """Transfer ``eps`` from the richer coordinate ``i`` to the poorer ``j``.

    The transfer must keep ``i`` strictly richer, so ``0 < eps < (w_i - w_j)/2``.
    """
    if not (0 <= i < p.dimension and 0 <= j < p.dimension) or i == j:
        raise ValueError("invalid transfer indices")
    eps = as_fraction(eps)
    gap = p.weights[i] - p.weights[j]
    if gap <= 0 or not 0 < eps < gap / 2:
        raise ValueError("invalid transfer amount")
    weights = list(p.weights)
    weights[i] -= eps
    weights[j] += eps
    return WeightProfile(tuple(weights))


def flatten(p: WeightProfile) -> WeightProfile:
    """Spread the total evenly over the support of ``p``."""
    support = p.support()
    if not support:
        raise ValueError("zero vector has no flat form")
    share = p.total() / len(support)
    on_support = set(support)
    return WeightProfile(
        tuple(share if k in on_support else Fraction(0) for k in range(p.dimension))
    )
