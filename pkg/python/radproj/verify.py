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

"""Exact cross-checks of the closed forms against the brute-force oracle"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from logging import getLogger
from typing import Callable

import numpy as np

from .bounds import sharp_tail_bound
from .config import Settings
from .majorization import WeightProfile, flatten, robin_hood
from .moments import chaos_extreme_moment, distortion_moment, gaussian_moment, khintchine_moment
from .oracle import chaos_law, chaos_moment, distortion_law, moment, tail

logger = getLogger(__name__)

# witnesses kept per suite
MAX_WITNESSES = 20


@dataclass
class CheckResult:
    """Outcome of one suite."""

    name: str
    passed: int = 0
    failed: int = 0
    witnesses: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when no check failed."""
        return self.failed == 0

    def check(self, condition: bool, witness: Callable[[], str]) -> None:
        """Count one check, keeping a witness for failures."""
        if condition:
            self.passed += 1
            return
        self.failed += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness())

    def summary(self) -> str:
        """One-line pass/fail count."""
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {status} passed={self.passed} failed={self.failed}"


@dataclass(frozen=True)
class VerifyConfig:
    """Sizes of the verification suites."""

    kmax: int = 12
    qmax: int = 10
    pairs: int = 200
    profiles: int = 50
    chain_profiles: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kmax < 1 or self.qmax < 1:
            raise ValueError("kmax and qmax must be positive")
        if self.pairs < 0 or self.profiles < 0 or self.chain_profiles < 0:
            raise ValueError("suite sizes must be nonnegative")


def _random_integers(rng: np.random.Generator, K: int, high: int) -> list[int]:
    return [int(v) for v in rng.integers(1, high + 1, size=K)]


def _random_profile(rng: np.random.Generator, kmax: int, kmin: int = 1) -> WeightProfile:
    """Profile with rational weights ``a_i / d`` on a support of random size."""
    K = int(rng.integers(kmin, kmax + 1))
    denominator = int(rng.integers(1, 10))
    numerators = _random_integers(rng, K, 30)
    zeros = int(rng.integers(0, 3))
    return WeightProfile(tuple(Fraction(a, denominator) for a in numerators) + (Fraction(0),) * zeros)


def _random_vector_profile(rng: np.random.Generator, kmax: int, flat: bool) -> WeightProfile:
    """Profile of an integer vector, flat on request; its chaos law is always enumerable."""
    K = int(rng.integers(1, kmax + 1))
    if flat:
        x = [int(rng.integers(1, 4))] * K
    else:
        x = _random_integers(rng, K, 5)
    signs = [1 if b else -1 for b in rng.integers(0, 2, size=K)]
    return WeightProfile.from_vector([s * v for s, v in zip(signs, x)])


def check_formula_equivalence(
    kmax: int = 12,
    qmax: int = 10,
    extreme_moment: Callable[[int, int], Fraction] = chaos_extreme_moment,
    settings: Settings = Settings(),
) -> CheckResult:
    """Flat unit-norm chaos moments from enumeration equal the closed form."""
    result = CheckResult("formula equivalence")
    for K in range(1, kmax + 1):
        law = chaos_law(WeightProfile.flat(K), settings.enum_cap, settings.workers)
        for q in range(1, qmax + 1):
            oracle, formula = moment(law, q), extreme_moment(K, q)
            result.check(
                oracle == formula,
                lambda K=K, q=q, o=oracle, f=formula: f"K={K} q={q}: oracle {o} != formula {f}",
            )
    return result


def _random_transfer(
    rng: np.random.Generator, kmax: int
) -> tuple[WeightProfile, WeightProfile]:
    """A rational profile and a transfer between two random support coordinates."""
    p = _random_profile(rng, max(kmax, 2), kmin=2)
    a, b = (int(k) for k in rng.choice(p.support(), size=2, replace=False))
    weights = list(p.weights)
    if weights[a] == weights[b]:
        weights[a] += 1
        p = WeightProfile(tuple(weights))
    i, j = (a, b) if p.weights[a] > p.weights[b] else (b, a)
    eps = (p.weights[i] - p.weights[j]) * Fraction(int(rng.integers(1, 100)), 201)
    return p, robin_hood(p, i, j, eps)


def _square_transfer(rng: np.random.Generator, kmax: int) -> tuple[WeightProfile, WeightProfile]:
    """An integer vector and a transfer landing on an integer vector again.

    Uses ``(u^2 + v^2)(s^2 + t^2) = (us - vt)^2 + (ut + vs)^2 = (us + vt)^2 + (ut - vs)^2``
    to get two coordinates with equal sums of squares. Both profiles stay
    enumerable by the oracle. Degenerate draws are repeated.
    """
    while True:
        u, v, s, t = (int(k) for k in rng.integers(1, 8, size=4))
        spread = sorted((abs(u * s - v * t), u * t + v * s))
        balanced = sorted((u * s + v * t, abs(u * t - v * s)))
        if spread[0] > balanced[0]:
            spread, balanced = balanced, spread
        if spread[0] < balanced[0] < balanced[1]:
            break
    rest = _random_integers(rng, int(rng.integers(0, max(kmax - 1, 1))), 5)
    p = WeightProfile.from_vector([spread[1], spread[0], *rest])
    return p, robin_hood(p, 0, 1, spread[1] ** 2 - balanced[1] ** 2)


def check_schur_transfers(
    pairs: int = 200, kmax: int = 10, qmax: int = 8, seed: int = 0, enum_cap: int = 20
) -> CheckResult:
    """Robin-Hood transfers never decrease even chaos moments.

    Every fourth pair moves weight between integer vectors, where the moments
    are also taken from the enumerated chaos law.
    """
    rng = np.random.default_rng(seed)
    result = CheckResult("schur transfers")
    for index in range(pairs):
        laws = None
        if index % 4 == 3:
            p, balanced = _square_transfer(rng, kmax)
            laws = (chaos_law(p, enum_cap), chaos_law(balanced, enum_cap))
        else:
            p, balanced = _random_transfer(rng, kmax)
        for q in range(2, qmax + 1, 2):
            before, after = chaos_moment(p, q), chaos_moment(balanced, q)
            result.check(
                after >= before,
                lambda p=p, r=balanced, q=q, a=after, b=before: (
                    f"q={q} p={p} transfer={r}: {a} < {b}"
                ),
            )
            if laws is None:
                continue
            oracle = (moment(laws[0], q), moment(laws[1], q))
            result.check(
                oracle == (before, after),
                lambda p=p, r=balanced, q=q, o=oracle, a=after, b=before: (
                    f"q={q} p={p} transfer={r}: oracle {o[0]}, {o[1]} != {b}, {a}"
                ),
            )
    return result


def check_domination(
    profiles: int = 50,
    kmax: int = 8,
    mmax: int = 3,
    qmax: int = 8,
    seed: int = 0,
    settings: Settings = Settings(),
) -> CheckResult:
    """Exact distortion moments are bounded by the flat-input moments, with equality when flat."""
    rng = np.random.default_rng(seed)
    result = CheckResult("moment domination")
    for index in range(profiles):
        p = _random_vector_profile(rng, kmax, flat=index % 5 == 0)
        K = p.sparsity()
        for m in range(1, mmax + 1):
            law = distortion_law(p, m, settings.atom_cap, settings.enum_cap, settings.workers)
            for q in range(2, qmax + 1):
                exact, bound = moment(law, q), distortion_moment(m, K, q)
                holds = exact == bound if p.is_flat() else exact <= bound
                result.check(
                    holds,
                    lambda p=p, m=m, q=q, e=exact, b=bound: f"p={p} m={m} q={q}: {e} vs {b}",
                )
    return result


def check_khintchine_chain(
    profiles: int = 100, kmax: int = 10, qmax: int = 10, seed: int = 0, enum_cap: int = 20
) -> CheckResult:
    """``E S^q <= E S_flat^q <= E N(0, total)^q`` for even ``q``."""
    rng = np.random.default_rng(seed)
    result = CheckResult("khintchine chain")
    for _ in range(profiles):
        p = _random_profile(rng, kmax)
        for q in range(2, qmax + 1, 2):
            base = khintchine_moment(p, q, enum_cap)
            flat = khintchine_moment(flatten(p), q, enum_cap)
            gauss = gaussian_moment(p.total(), q)
            result.check(
                base <= flat <= gauss,
                lambda p=p, q=q, a=base, b=flat, c=gauss: f"p={p} q={q}: {a}, {b}, {c}",
            )
    return result


def check_tail_validity(
    kmax: int = 8, mmax: int = 2, seed: int = 0, settings: Settings = Settings()
) -> CheckResult:
    """Exact tails of the distortion law stay below the sharp bound."""
    rng = np.random.default_rng(seed)
    result = CheckResult("tail validity")
    grid = [Fraction(k, 10) for k in range(1, 11)]
    for K in range(1, kmax + 1):
        candidates = [WeightProfile.flat(K), _random_vector_profile(rng, K, flat=False)]
        for p in candidates:
            for m in range(1, mmax + 1):
                law = distortion_law(p, m, settings.atom_cap, settings.enum_cap, settings.workers)
                for eps in grid:
                    exact = tail(law, eps)
                    bound = sharp_tail_bound(m, p.sparsity(), eps, settings.qmax)
                    result.check(
                        exact <= bound,
                        lambda p=p, m=m, e=eps, t=exact, b=bound: (
                            f"p={p} m={m} eps={e}: tail {t} > bound {b!r}"
                        ),
                    )
    return result


@dataclass
class VerifyReport:
    """Results of every suite, in run order."""

    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        """True when all suites passed."""
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        """Summary lines followed by the witnesses of failed suites."""
        out = [r.summary() for r in self.results]
        for r in self.results:
            out.extend(f"{r.name}: {w}" for w in r.witnesses)
        return out


def run_verification(
    config: VerifyConfig = VerifyConfig(),
    settings: Settings = Settings(),
    extreme_moment: Callable[[int, int], Fraction] = chaos_extreme_moment,
) -> VerifyReport:
    """Run all suites.

    Args:
        config: Suite sizes and the seed of the random profiles.
        settings: Enumeration and atom caps for the oracle.
        extreme_moment: Closed form checked by the formula suite.
    """
    if config.kmax > settings.enum_cap:
        raise ValueError(f"kmax={config.kmax} exceeds the enumeration cap {settings.enum_cap}")
    suites = [
        lambda: check_formula_equivalence(config.kmax, config.qmax, extreme_moment, settings),
        lambda: check_schur_transfers(
            config.pairs, min(config.kmax, 10), min(config.qmax, 8), config.seed, settings.enum_cap
        ),
        lambda: check_domination(
            config.profiles, min(config.kmax, 8), 3, min(config.qmax, 8), config.seed, settings
        ),
        lambda: check_khintchine_chain(
            config.chain_profiles, min(config.kmax, 10), config.qmax, config.seed, settings.enum_cap
        ),
        lambda: check_tail_validity(min(config.kmax, 8), 2, config.seed, settings),
    ]
    results = []
    for suite in suites:
        outcome = suite()
        logger.info("%s", outcome.summary())
        results.append(outcome)
    return VerifyReport(results)
