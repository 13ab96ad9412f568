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

"""Brute-force laws of the quadratic Rademacher chaos and of the distortion"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger

import numpy as np

from .config import DEFAULT_ATOM_CAP, DEFAULT_ENUM_CAP, DEFAULT_WORKERS
from .majorization import WeightProfile, as_fraction
from .moments import iid_average_moment, rademacher_even_moments

logger = getLogger(__name__)

# sign representatives enumerated per chunk
_CHUNK = 1 << 16
# largest |sum a_i| accumulated in int64
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class DiscreteLaw:
    """Finitely supported law with exact rational values and probabilities.

    Atoms with equal values are merged on construction and kept sorted by
    value.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        merged: dict[Fraction, Fraction] = {}
        for value, prob in self.atoms:
            value, prob = as_fraction(value), as_fraction(prob)
            if prob < 0:
                raise ValueError("probabilities must be nonnegative")
            if prob == 0:
                continue
            merged[value] = merged.get(value, Fraction(0)) + prob
        if sum(merged.values(), Fraction(0)) != 1:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @classmethod
    def point(cls, value=0) -> DiscreteLaw:
        """Dirac law at ``value``."""
        return cls(((as_fraction(value), Fraction(1)),))

    def __len__(self) -> int:
        return len(self.atoms)

    def support_max(self) -> Fraction:
        """Largest absolute atom value."""
        return max(abs(value) for value, _ in self.atoms)

    def mean(self) -> Fraction:
        """Expected value."""
        return moment(self, 1)

    def scaled(self, factor) -> DiscreteLaw:
        """Law of ``factor * X``."""
        factor = as_fraction(factor)
        return DiscreteLaw(tuple((value * factor, prob) for value, prob in self.atoms))


def moment(law: DiscreteLaw, q: int) -> Fraction:
    """Return ``sum p_i v_i^q`` exactly."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    return sum((prob * value**q for value, prob in law.atoms), Fraction(0))


def tail(law: DiscreteLaw, eps) -> Fraction:
    """Return ``P[|X| > eps]`` (strict inequality)."""
    eps = as_fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return sum((prob for value, prob in law.atoms if abs(value) > eps), Fraction(0))


@dataclass(frozen=True)
class _ChaosHistogram:
    """Chaos values ``scale * (s^2 - offset)`` with ``counts[s]`` out of ``2^exponent``.

    ``s`` runs over the absolute integer sums ``|sum a_i r_i|`` of the
    enumerated sign representatives.
    """

    scale: Fraction
    offset: int
    counts: Counter
    exponent: int


def _integer_amplitudes(p: WeightProfile) -> tuple[Fraction, list[int]]:
    decomposition = p.amplitudes()
    if decomposition is None:
        raise ValueError("weights share no rational amplitude scale; use chaos_moment")
    scale, amplitudes = decomposition
    support = [t for t in amplitudes if t > 0]
    common = math.lcm(*(t.denominator for t in support))
    integers = [int(t * common) for t in support]
    return scale / (common * common), integers


def _count_sums_numpy(amplitudes: list[int], start: int, stop: int) -> Counter:
    head = np.asarray(amplitudes[:-1], dtype=np.int64)
    shifts = np.arange(len(head), dtype=np.int64)
    index = np.arange(start, stop, dtype=np.int64)
    signs = 1 - 2 * ((index[:, None] >> shifts) & 1)
    sums = np.abs(signs @ head + amplitudes[-1])
    values, counts = np.unique(sums, return_counts=True)
    return Counter(dict(zip(values.tolist(), counts.tolist())))


def _count_sums_python(amplitudes: list[int], start: int, stop: int) -> Counter:
    head, last = amplitudes[:-1], amplitudes[-1]
    counts: Counter = Counter()
    for index in range(start, stop):
        total = last
        for bit, a in enumerate(head):
            total += -a if (index >> bit) & 1 else a
        counts[abs(total)] += 1
    return counts


def _chaos_histogram(p: WeightProfile, enum_cap: int, workers: int) -> _ChaosHistogram:
    K = p.sparsity()
    if K > enum_cap:
        raise ValueError("enumeration too large")
    if K <= 1:
        return _ChaosHistogram(Fraction(0), 0, Counter({0: 1}), 0)
    scale, amplitudes = _integer_amplitudes(p)
    # the last sign is pinned to +1; v and -v give the same chaos value
    representatives = 1 << (K - 1)
    counter = _count_sums_numpy if sum(amplitudes) < _INT64_SAFE else _count_sums_python
    bounds = [
        (start, min(start + _CHUNK, representatives))
        for start in range(0, representatives, _CHUNK)
    ]
    logger.debug(
        "chaos enumeration: K=%s representatives=%s chunks=%s workers=%s",
        K,
        representatives,
        len(bounds),
        workers,
    )
    counts: Counter = Counter()
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(lambda b: counter(amplitudes, *b), bounds):
                counts.update(partial)
    else:
        for start, stop in bounds:
            counts.update(counter(amplitudes, start, stop))
    offset = sum(a * a for a in amplitudes)
    return _ChaosHistogram(scale, offset, counts, K - 1)


def chaos_law(
    p: WeightProfile, enum_cap: int = DEFAULT_ENUM_CAP, workers: int = DEFAULT_WORKERS
) -> DiscreteLaw:
    """Return the exact law of ``sum_{i != j} x_i x_j r_i r_j``.

    The value of each sign vector is ``(sum x_i r_i)^2 - sum x_i^2``. Only the
    support enters the enumeration, and the ``2^(K-1)`` representatives with
    the last support sign fixed are counted twice.

    Args:
        p: Profile whose support weights share one rational square class
            (always true for profiles built from rational vectors).
        enum_cap: Largest support size enumerated.
        workers: Threads used for the enumeration chunks.

    Returns:
        DiscreteLaw: the chaos law.
    """
    histogram = _chaos_histogram(p, enum_cap, workers)
    denominator = 1 << histogram.exponent
    return DiscreteLaw(
        tuple(
            (histogram.scale * (s * s - histogram.offset), Fraction(count, denominator))
            for s, count in histogram.counts.items()
        )
    )


def _convolve(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for u, cu in a.items():
        for v, cv in b.items():
            out[u + v] += cu * cv
    return out


def distortion_law(
    p: WeightProfile,
    m: int,
    atom_cap: int = DEFAULT_ATOM_CAP,
    enum_cap: int = DEFAULT_ENUM_CAP,
    workers: int = DEFAULT_WORKERS,
) -> DiscreteLaw:
    """Return the exact law of ``E(x) = (1/m) sum_k C_k / total(p)`` for IID chaos copies ``C_k``.

    The m-fold convolution runs on integer chaos numerators so atoms merge by
    integer equality.

    Args:
        p: Nonzero profile.
        m: Number of projection rows.
        atom_cap: Largest number of atoms allowed in any intermediate law.
        enum_cap: Largest support size enumerated.
        workers: Threads used for the enumeration chunks.
    """
    if m < 1:
        raise ValueError("m must be positive")
    total = p.total()
    if total == 0:
        raise ValueError("zero vector")
    histogram = _chaos_histogram(p, enum_cap, workers)
    if p.sparsity() <= 1:
        return DiscreteLaw.point(0)
    row: Counter = Counter()
    for s, count in histogram.counts.items():
        row[s * s - histogram.offset] += count
    if len(row) > atom_cap:
        raise ValueError("instance too large for exact law")
    law = row
    for step in range(1, m):
        law = _convolve(law, row)
        logger.debug("distortion convolution: rows=%s atoms=%s", step + 1, len(law))
        if len(law) > atom_cap:
            raise ValueError("instance too large for exact law")
    factor = histogram.scale / (total * m)
    denominator = 1 << (histogram.exponent * m)
    return DiscreteLaw(
        tuple((factor * u, Fraction(count, denominator)) for u, count in law.items())
    )


def _chaos_moments(p: WeightProfile, qmax: int) -> list[Fraction]:
    total = p.total()
    even = rademacher_even_moments(p.support_weights(), qmax)
    return [
        sum(
            (math.comb(q, j) * (-total) ** (q - j) * even[j] for j in range(q + 1)),
            Fraction(0),
        )
        for q in range(qmax + 1)
    ]


def chaos_moment(p: WeightProfile, q: int) -> Fraction:
    """Return ``E(sum_{i != j} x_i x_j r_i r_j)^q`` for any rational profile.

    Uses ``E(S^2 - ||x||^2)^q = sum_j C(q, j) (-||x||^2)^(q-j) E S^(2j)`` with
    the even moments of ``S = sum x_i r_i`` folded in coordinate-wise, so no
    square roots of the weights are needed.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    return _chaos_moments(p, q)[q]


def profile_distortion_moment(p: WeightProfile, m: int, q: int) -> Fraction:
    """Return ``E E(x)^q`` for an m-row projection of the profile ``p``."""
    total = p.total()
    if total == 0:
        raise ValueError("zero vector")
    normalized = [value / total**k for k, value in enumerate(_chaos_moments(p, q))]
    return iid_average_moment(normalized, m, q)
