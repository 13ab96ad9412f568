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

"""Closed-form moments of Rademacher sums, chaoses and averaged distortions

All closed forms are evaluated in exact integer/rational arithmetic. Moment
tables for very large sparsity or order fall back to a floating-point path
(log-space binomial weights, compensated summation) and are flagged as
approximate.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from logging import getLogger
from typing import Sequence

import numpy as np
from scipy.stats import binom

from .config import DEFAULT_ENUM_CAP, DEFAULT_QMAX, EXACT_K_LIMIT, EXACT_Q_LIMIT
from .majorization import WeightProfile
from .partitions import partitions

logger = getLogger(__name__)


def _check_sparsity(K: int) -> None:
    if K < 1:
        raise ValueError(f"sparsity must be positive, got {K}")


def _binomial_row(K: int):
    """Yield ``(i, C(K, i))`` for ``i = 0..K``, updating the coefficient incrementally."""
    coeff = 1
    for i in range(K + 1):
        yield i, coeff
        coeff = coeff * (K - i) // (i + 1)


def rademacher_sum_moment(K: int, q: int) -> Fraction:
    """Return ``E (r_1 + ... + r_K)^q`` for independent signs ``r_i``.

    Evaluated as ``2^-K * sum_i C(K, i) (K - 2i)^q``; odd orders vanish.
    """
    if K < 0 or q < 0:
        raise ValueError("K and q must be nonnegative")
    if q % 2 == 1:
        return Fraction(0)
    numerator = sum(coeff * (K - 2 * i) ** q for i, coeff in _binomial_row(K))
    return Fraction(numerator, 1 << K)


def sum_moment_ratio(n: int, q: int) -> Fraction:
    """Return ``E (sum r_i / sqrt(n))^q`` for even ``q``."""
    if q % 2 == 1:
        raise ValueError("q must be even")
    _check_sparsity(n)
    return rademacher_sum_moment(n, q) / n ** (q // 2)


@lru_cache(maxsize=256)
def _chaos_numerators(K: int, qmax: int) -> tuple[int, ...]:
    """Integers ``N_q`` with ``E(Z^2 - 1)^q = N_q / (2^K K^q)`` for ``q = 0..qmax``."""
    logger.debug("chaos numerators: K=%s qmax=%s", K, qmax)
    numerators = [0] * (qmax + 1)
    for i, coeff in _binomial_row(K):
        base = (2 * i - K) ** 2 - K
        power = coeff
        for q in range(qmax + 1):
            numerators[q] += power
            power *= base
    return tuple(numerators)


def chaos_extreme_moment(K: int, q: int) -> Fraction:
    """Return ``mu_q = E(Z^2 - 1)^q`` for the standardized symmetric binomial ``Z``.

    This is the largest q-th moment of the quadratic chaos
    ``sum_{i != j} x_i x_j r_i r_j`` over unit vectors with ``K`` nonzero
    components, attained by the flat vector.

    Args:
        K: Sparsity, the number of trials of ``Binom(K, 1/2)``.
        q: Moment order.

    Returns:
        Fraction: ``2^-K sum_i C(K, i) ((2i - K)^2 / K - 1)^q``.
    """
    _check_sparsity(K)
    if q < 0:
        raise ValueError("q must be nonnegative")
    numerator = _chaos_numerators(K, q)[q]
    return Fraction(numerator, (1 << K) * K**q)


def chaos_extreme_moment_scaled(p: WeightProfile, q: int) -> Fraction:
    """Return the sharp bound ``total(p)^q * mu_q(K)`` on the chaos moment of ``p``."""
    K = p.sparsity()
    if K == 0:
        raise ValueError("zero vector has no extreme moment")
    return p.total() ** q * chaos_extreme_moment(K, q)


def iid_average_moment(moments: Sequence, m: int, q: int):
    """Return the q-th moment of the average of ``m`` IID zero-mean variables.

    The expansion runs over partitions ``lambda`` of ``q`` with parts >= 2 and
    at most ``m`` parts; parts equal to 1 are dropped because the mean is 0::

        m^-q * sum_lambda [q! / prod lambda_i!] * [m! / ((m - l)! prod f_j!)] * prod moments[lambda_i]

    Args:
        moments: ``moments[k]`` is the k-th moment of one variable, ``k = 0..q``.
        m: Number of averaged variables.
        q: Moment order.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if len(moments) > 1 and moments[1] != 0:
        raise ValueError("averaged variables must have zero mean")
    if q == 0:
        return moments[0] if moments else 1
    total = 0
    for part in partitions(q, min_part=2, max_length=m):
        term = part.multinomial() * part.arrangements(m)
        for k in part.parts:
            term *= moments[k]
        total += term
    if isinstance(total, float):
        return total / float(m) ** q
    return Fraction(total) / m**q


def distortion_moment(m: int, K: int, q: int) -> Fraction:
    """Return ``nu_q = E E_*^q`` for ``E_* = (1/m) sum_{i<=m} (Z_i^2 - 1)``.

    ``nu_q`` bounds every q-th distortion moment of an m-row Rademacher
    projection applied to a K-sparse input, with equality for flat inputs.
    """
    if m < 1:
        raise ValueError("m must be positive")
    _check_sparsity(K)
    if q < 0:
        raise ValueError("q must be nonnegative")
    if q == 0:
        return Fraction(1)
    numerators = _chaos_numerators(K, q)
    # mu_k = N_k / (2^K K^k); group the partition terms by length so only
    # integers are accumulated
    by_length: dict[int, int] = defaultdict(int)
    for part in partitions(q, min_part=2, max_length=m):
        term = part.multinomial() * part.arrangements(m)
        for k in part.parts:
            term *= numerators[k]
        by_length[part.length] += term
    if not by_length:
        return Fraction(0)
    longest = max(by_length)
    numerator = sum(value << (K * (longest - length)) for length, value in by_length.items())
    return Fraction(numerator, (1 << (K * longest)) * K**q * m**q)


def rademacher_even_moments(
    weights: Sequence[Fraction], half_order: int, density=1
) -> list[Fraction]:
    """Return ``E S^(2j)`` for ``S = sum x_i r_i``, ``j = 0..half_order``.

    Each coordinate is folded in by summing out its two signs:
    ``E(S + x r)^(2j) = sum_l C(2j, 2l) x^(2l) E S^(2j - 2l)``, so only the
    squared weights enter and the result is exact.

    With ``density`` p < 1 each sign is kept with probability p and scaled by
    ``1/sqrt(p)``, so ``E r^(2l) = p^(1 - l)`` for ``l >= 1``.
    """
    density = Fraction(density)
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    even = [Fraction(1)] + [Fraction(0)] * half_order
    for weight in weights:
        if weight == 0:
            continue
        powers = [Fraction(1)]
        for l in range(1, half_order + 1):
            powers.append(weight**l * density ** (1 - l))
        even = [
            sum(math.comb(2 * j, 2 * l) * powers[l] * even[j - l] for l in range(j + 1))
            for j in range(half_order + 1)
        ]
    return even


def khintchine_moment(p: WeightProfile, q: int, enum_cap: int = DEFAULT_ENUM_CAP) -> Fraction:
    """Return ``E (sum x_i r_i)^q`` exactly.

    The expectation runs over the sign assignments of the support only; odd
    orders are 0 by symmetry.

    Args:
        p: Squared-weight profile of ``x``.
        q: Moment order.
        enum_cap: Largest support size accepted.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    if q % 2 == 1:
        return Fraction(0)
    if p.sparsity() > enum_cap:
        raise ValueError("use flat-vector or Gaussian bound")
    return rademacher_even_moments(p.support_weights(), q // 2)[q // 2]


def sparse_distortion_moment(m: int, p, profile: WeightProfile, q: int = 2) -> Fraction:
    """Return ``E E(x)^q`` for an m-row sparse sign projection of density ``p``.

    Entries are ``r / sqrt(m p)`` with probability ``p`` and 0 otherwise. For
    ``p = 1`` and a flat profile this is ``distortion_moment(m, K, q)``; for
    ``q = 2`` it is ``(sum w_i^2 / p + 2 - 3 sum w_i^2) / m`` on unit totals.

    Args:
        m: Number of rows.
        p: Density in ``(0, 1]``, converted to an exact rational.
        profile: Squared-weight profile of the input.
        q: Moment order.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if q < 0:
        raise ValueError("q must be nonnegative")
    total = profile.total()
    if total == 0:
        raise ValueError("zero vector has no distortion")
    even = rademacher_even_moments(profile.support_weights(), q, p)
    # moments of one row's Z^2 / total - 1
    row = [
        sum(
            (math.comb(k, i) * (-1) ** (k - i) * even[i] / total**i for i in range(k + 1)),
            Fraction(0),
        )
        for k in range(q + 1)
    ]
    return Fraction(iid_average_moment(row, m, q))


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def gaussian_moment(sigma2, q: int) -> Fraction:
    """Return ``E N(0, sigma2)^q``: 0 for odd ``q``, ``sigma^q (q-1)!!`` for even ``q``."""
    sigma2 = Fraction(sigma2)
    if sigma2 < 0:
        raise ValueError("variance must be nonnegative")
    if q < 0:
        raise ValueError("q must be nonnegative")
    if q % 2 == 1:
        return Fraction(0)
    return sigma2 ** (q // 2) * _double_factorial(q - 1)


def centered_chi2_moments(qmax: int) -> list[Fraction]:
    """Return ``E (N^2 - 1)^k`` for ``k = 0..qmax`` and a standard normal ``N``."""
    return [
        sum(
            (math.comb(k, j) * (-1) ** (k - j) * _double_factorial(2 * j - 1) for j in range(k + 1)),
            Fraction(0),
        )
        for k in range(qmax + 1)
    ]


@dataclass(frozen=True)
class ChaosMomentTable:
    """Moments ``mu_1..mu_qmax`` of ``Z^2 - 1`` for sparsity ``K``."""

    K: int
    moments: tuple
    exact: bool = True

    @property
    def qmax(self) -> int:
        """Largest tabulated order."""
        return len(self.moments)

    def __getitem__(self, q: int):
        if q == 0:
            return Fraction(1) if self.exact else 1.0
        if not 1 <= q <= self.qmax:
            raise IndexError(f"order {q} outside 1..{self.qmax}")
        return self.moments[q - 1]

    def as_sequence(self) -> list:
        """Moments indexed by order, starting at order 0."""
        return [self[0], *self.moments]


@dataclass(frozen=True)
class DistortionMomentTable:
    """Moments ``nu_2..nu_qmax`` of the averaged extreme distortion ``E_*``."""

    m: int
    K: int
    moments: tuple
    exact: bool = True

    @property
    def qmax(self) -> int:
        """Largest tabulated order."""
        return len(self.moments) + 1

    def __getitem__(self, q: int):
        if not 2 <= q <= self.qmax:
            raise IndexError(f"order {q} outside 2..{self.qmax}")
        return self.moments[q - 2]

    def even_orders(self) -> dict[int, object]:
        """Map even order -> moment."""
        return {q: self[q] for q in range(2, self.qmax + 1, 2)}


def _use_exact(K: int, qmax: int, exact: bool | None) -> bool:
    if exact is None:
        return K <= EXACT_K_LIMIT and qmax <= EXACT_Q_LIMIT
    return exact


def _chaos_moments_float(K: int, qmax: int) -> list[float]:
    """Floating moments ``mu_1..mu_qmax`` from log-space binomial weights."""
    trials = np.arange(K + 1)
    log_weights = binom.logpmf(trials, K, 0.5)
    centered = (2.0 * trials - K) ** 2 / K - 1.0
    magnitude = np.abs(centered)
    with np.errstate(divide="ignore"):
        log_magnitude = np.log(magnitude)
    out = []
    for q in range(1, qmax + 1):
        with np.errstate(over="ignore", under="ignore"):
            terms = np.exp(log_weights + q * log_magnitude)
        terms = np.where(magnitude == 0, 0.0, terms * np.sign(centered) ** q)
        out.append(math.fsum(terms.tolist()))
    return out


@lru_cache(maxsize=128)
def chaos_moment_table(K: int, qmax: int = DEFAULT_QMAX, exact: bool | None = None) -> ChaosMomentTable:
    """Tabulate ``mu_1..mu_qmax`` for sparsity ``K``.

    Exact rationals are used for ``K <= 10^4`` and ``qmax <= 64`` unless
    ``exact`` forces a choice; larger tables use the floating path.
    """
    _check_sparsity(K)
    if qmax < 1:
        raise ValueError("qmax must be positive")
    use_exact = _use_exact(K, qmax, exact)
    logger.debug("chaos moment table: K=%s qmax=%s exact=%s", K, qmax, use_exact)
    if use_exact:
        moments = tuple(chaos_extreme_moment(K, q) for q in range(1, qmax + 1))
    else:
        moments = tuple(_chaos_moments_float(K, qmax))
    return ChaosMomentTable(K=K, moments=moments, exact=use_exact)


def _binomial_convolve(a: Sequence[float], b: Sequence[float]) -> list[float]:
    """Moments of ``X + Y`` from moments of independent ``X`` and ``Y``."""
    return [
        math.fsum(math.comb(q, j) * a[j] * b[q - j] for j in range(q + 1))
        for q in range(len(a))
    ]


def _sum_moments_float(moments: Sequence[float], m: int) -> list[float]:
    """Moments of a sum of ``m`` IID copies by repeated doubling."""
    result = [1.0] + [0.0] * (len(moments) - 1)
    power = list(moments)
    while m:
        if m & 1:
            result = _binomial_convolve(result, power)
        m >>= 1
        if m:
            power = _binomial_convolve(power, power)
    return result


@lru_cache(maxsize=128)
def distortion_moment_table(
    m: int, K: int, qmax: int = DEFAULT_QMAX, exact: bool | None = None
) -> DistortionMomentTable:
    """Tabulate ``nu_2..nu_qmax`` for ``m`` rows and sparsity ``K``."""
    if m < 1:
        raise ValueError("m must be positive")
    _check_sparsity(K)
    if qmax < 2:
        raise ValueError("qmax must be at least 2")
    use_exact = _use_exact(K, qmax, exact)
    logger.debug("distortion moment table: m=%s K=%s qmax=%s exact=%s", m, K, qmax, use_exact)
    if use_exact:
        moments = tuple(distortion_moment(m, K, q) for q in range(2, qmax + 1))
    else:
        chaos = chaos_moment_table(K, qmax, exact=False).as_sequence()
        sums = _sum_moments_float([float(v) for v in chaos], m)
        moments = tuple(sums[q] / float(m) ** q for q in range(2, qmax + 1))
    return DistortionMomentTable(m=m, K=K, moments=moments, exact=use_exact)
