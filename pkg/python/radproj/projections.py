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

"""Rademacher projection sampling and Monte Carlo distortion estimates

Every matrix is drawn from a Philox counter-based generator seeded by a
``numpy.random.SeedSequence``. Trial ``t`` of a simulation seeded with ``s``
uses the matrix ``sample_matrix(m, n, scheme, p, trial_seed(s, t))``, so
trials can be scheduled on any number of workers without changing results.

Rows are drawn in order. Dense rows take ``ceil(n / 64)`` raw 64-bit words,
one bit per entry (least significant first, set bit = negative sign). Sparse
rows take one uniform double per entry: ``u < p/2`` gives ``+s``,
``p/2 <= u < p`` gives ``-s`` and ``u >= p`` gives 0.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from logging import getLogger
from typing import Iterator, Sequence

import numpy as np

from .bounds import CurveMethod, TailCurve, check_eps_grid
from .config import DEFAULT_WORKERS

logger = getLogger(__name__)

# entries generated per row block
_BLOCK_ENTRIES = 1 << 20


class Scheme(str, Enum):
    """Entry distribution of a projection matrix."""

    DENSE = "dense_rademacher"
    SPARSE = "sparse_rademacher"

    @classmethod
    def parse(cls, value) -> Scheme:
        """Accept ``dense``/``sparse`` shorthands as well as the full names."""
        if isinstance(value, Scheme):
            return value
        shorthand = {"dense": cls.DENSE, "sparse": cls.SPARSE}
        if value in shorthand:
            return shorthand[value]
        return cls(value)


def scheme_for_density(p: float) -> Scheme:
    """Dense Rademacher for ``p == 1``, sparse otherwise."""
    return Scheme.DENSE if p == 1 else Scheme.SPARSE


def _check_scheme(scheme: Scheme, p: float) -> None:
    if not 0 < p <= 1:
        raise ValueError(f"density p must lie in (0, 1], got {p}")
    if scheme == Scheme.DENSE and p != 1:
        raise ValueError("dense scheme requires p = 1")


def trial_seed(seed: int, *path: int) -> int:
    """Derive the 64-bit seed of the substream addressed by ``path``.

    Defined as ``SeedSequence(seed, spawn_key=path).generate_state(1, uint64)[0]``.
    """
    state = np.random.SeedSequence(seed, spawn_key=tuple(path)).generate_state(1, np.uint64)
    return int(state[0])


def _sign_blocks(
    m: int, n: int, scheme: Scheme, p: float, seed: int
) -> Iterator[np.ndarray]:
    """Yield consecutive row blocks of unscaled entries in ``{-1, 0, +1}``."""
    block = max(1, _BLOCK_ENTRIES // n)
    bit_generator = np.random.Philox(np.random.SeedSequence(seed))
    generator = np.random.Generator(bit_generator)
    words = (n + 63) // 64
    for start in range(0, m, block):
        rows = min(block, m - start)
        if scheme == Scheme.DENSE:
            raw = bit_generator.random_raw(rows * words).astype(np.uint64)
            bits = np.unpackbits(raw.view(np.uint8), bitorder="little")
            bits = bits.reshape(rows, words * 64)[:, :n]
            yield 1.0 - 2.0 * bits
        else:
            u = generator.random((rows, n))
            yield np.where(u < p / 2, 1.0, np.where(u < p, -1.0, 0.0))


def _entry_scale_squared(m: int, p: float) -> float:
    return 1.0 / (m * p)


@dataclass(frozen=True)
class SignMatrix:
    """An m x n projection matrix identified by its scheme, density and seed.

    Entries are only materialised on first access to :attr:`entries`.
    """

    m: int
    n: int
    scheme: Scheme
    p: float
    seed: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("matrix dimensions must be positive")
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        _check_scheme(self.scheme, self.p)

    @property
    def scale(self) -> float:
        """Magnitude ``1 / sqrt(m p)`` of the nonzero entries."""
        return math.sqrt(_entry_scale_squared(self.m, self.p))

    @cached_property
    def signs(self) -> np.ndarray:
        """Unscaled entries in ``{-1, 0, +1}``."""
        return np.vstack(list(_sign_blocks(self.m, self.n, self.scheme, self.p, self.seed)))

    @cached_property
    def entries(self) -> np.ndarray:
        """Scaled entries ``s * signs``."""
        return self.signs * self.scale


def sample_matrix(m: int, n: int, scheme=Scheme.DENSE, p: float = 1.0, seed: int = 0) -> SignMatrix:
    """Return the projection matrix determined by ``(m, n, scheme, p, seed)``.

    Args:
        m: Number of rows.
        n: Number of columns.
        scheme: ``Scheme.DENSE`` (``p`` must be 1) or ``Scheme.SPARSE``.
        p: Fraction of nonzero entries, in ``(0, 1]``.
        seed: Nonnegative integer seed.

    Returns:
        SignMatrix: identical arguments give bit-identical entries.
    """
    return SignMatrix(m=m, n=n, scheme=Scheme.parse(scheme), p=float(p), seed=seed)


def _squared_norm(x: np.ndarray) -> float:
    norm2 = math.fsum((x * x).tolist())
    if norm2 == 0:
        raise ValueError("zero vector")
    return norm2


def distortion(matrix: SignMatrix, x) -> float:
    """Return ``||Phi x||^2 / ||x||^2 - 1``."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != matrix.n:
        raise ValueError(f"vector length {x.shape[0]} does not match {matrix.n} columns")
    norm2 = _squared_norm(x)
    support = np.flatnonzero(x)
    y = matrix.signs[:, support] @ x[support]
    projected = math.fsum((y * y).tolist()) * _entry_scale_squared(matrix.m, matrix.p)
    return projected / norm2 - 1.0


def _matrix_free_distortion(
    x_support: np.ndarray,
    support: np.ndarray,
    norm2: float,
    m: int,
    n: int,
    scheme: Scheme,
    p: float,
    seed: int,
) -> float:
    squares: list[float] = []
    for block in _sign_blocks(m, n, scheme, p, seed):
        y = block[:, support] @ x_support
        squares.extend((y * y).tolist())
    return math.fsum(squares) * _entry_scale_squared(m, p) / norm2 - 1.0


def flat_vector(n: int, K: int) -> np.ndarray:
    """Unit vector with ``K`` equal leading components and zeros after."""
    if not 1 <= K <= n:
        raise ValueError("need 1 <= K <= n")
    x = np.zeros(n)
    x[:K] = 1.0 / math.sqrt(K)
    return x


def spread_vector(n: int, K: int, decay: float) -> np.ndarray:
    """Unit vector with ``K`` leading components proportional to ``decay**i``."""
    if not 1 <= K <= n:
        raise ValueError("need 1 <= K <= n")
    if not 0 < decay <= 1:
        raise ValueError("decay must lie in (0, 1]")
    x = np.zeros(n)
    x[:K] = decay ** np.arange(K)
    return x / math.sqrt(math.fsum((x * x).tolist()))


@dataclass(frozen=True)
class DistortionSample:
    """Realised distortions ``E(x)`` of independent trials, in trial order."""

    values: np.ndarray
    m: int
    n: int
    K: int
    norm: float
    scheme: Scheme
    p: float
    seed: int

    @property
    def trials(self) -> int:
        """Number of trials."""
        return int(self.values.shape[0])

    def mean(self) -> float:
        """Sample mean of ``E(x)``."""
        return math.fsum(self.values.tolist()) / self.trials

    def second_moment(self) -> float:
        """Sample mean of ``E(x)^2``."""
        return math.fsum((self.values * self.values).tolist()) / self.trials

    def standard_error(self, power: int = 1) -> float:
        """Standard error of the sample mean of ``E(x)**power``."""
        if self.trials < 2:
            return math.inf
        return float(np.std(self.values**power, ddof=1)) / math.sqrt(self.trials)

    def ccdf(self, eps_grid: Sequence[float]) -> list[float]:
        """Fraction of trials with ``|E(x)| > eps`` for each ``eps``."""
        magnitudes = np.abs(self.values)
        return [float(np.count_nonzero(magnitudes > eps)) / self.trials for eps in eps_grid]

    def quantiles(self, levels: Sequence[float]) -> list[float]:
        """Empirical quantiles of ``|E(x)|``."""
        return [float(v) for v in np.quantile(np.abs(self.values), list(levels))]


def simulate_distortion(
    x,
    m: int,
    scheme=Scheme.DENSE,
    p: float = 1.0,
    trials: int = 1000,
    seed: int = 0,
    workers: int = DEFAULT_WORKERS,
) -> DistortionSample:
    """Project ``x`` with ``trials`` independent matrices and record the distortions.

    Matrices are never stored; row blocks are regenerated from the trial seed
    and only the support columns of ``x`` are multiplied.

    Args:
        x: Nonzero input vector.
        m: Number of rows.
        scheme: Entry distribution.
        p: Density of the sparse scheme.
        trials: Number of matrices drawn.
        seed: Base seed; trial ``t`` uses ``trial_seed(seed, t)``.
        workers: Threads evaluating trials; results stay in trial order.
    """
    scheme = Scheme.parse(scheme)
    _check_scheme(scheme, p)
    if m < 1:
        raise ValueError("m must be positive")
    if trials < 1:
        raise ValueError("trials must be positive")
    x = np.asarray(x, dtype=np.float64).ravel()
    norm2 = _squared_norm(x)
    support = np.flatnonzero(x)
    x_support = x[support]
    n = x.shape[0]

    def run(trial: int) -> float:
        return _matrix_free_distortion(
            x_support, support, norm2, m, n, scheme, p, trial_seed(seed, trial)
        )

    logger.debug(
        "simulating: n=%s K=%s m=%s scheme=%s p=%s trials=%s workers=%s",
        n,
        support.shape[0],
        m,
        scheme.value,
        p,
        trials,
        workers,
    )
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(run, range(trials)))
    else:
        values = [run(trial) for trial in range(trials)]
    return DistortionSample(
        values=np.asarray(values),
        m=m,
        n=n,
        K=int(support.shape[0]),
        norm=math.sqrt(norm2),
        scheme=scheme,
        p=float(p),
        seed=seed,
    )


def empirical_ccdf(
    n: int,
    K: int,
    m: int,
    scheme=Scheme.DENSE,
    p: float = 1.0,
    trials: int = 1000,
    eps_grid: Sequence[float] = (0.1,),
    seed: int = 0,
    x=None,
    workers: int = DEFAULT_WORKERS,
) -> TailCurve:
    """Empirical ``P[|E(x)| > eps]`` over a grid.

    Args:
        n: Input dimension.
        K: Sparsity of the default flat input.
        m: Number of rows.
        scheme: Entry distribution.
        p: Density.
        trials: Number of matrices drawn.
        eps_grid: Positive, strictly increasing thresholds.
        seed: Base seed.
        x: Explicit input replacing ``flat_vector(n, K)``.
        workers: Threads evaluating trials.

    Returns:
        TailCurve: method ``empirical``.
    """
    grid = check_eps_grid(eps_grid)
    vector = flat_vector(n, K) if x is None else np.asarray(x, dtype=np.float64)
    sample = simulate_distortion(vector, m, scheme, p, trials, seed, workers)
    return TailCurve(
        CurveMethod.EMPIRICAL,
        m,
        sample.K,
        tuple(zip(grid, sample.ccdf(grid))),
        {"trials": trials, "seed": seed, "scheme": sample.scheme.value, "p": sample.p, "n": sample.n},
    )


SWEEP_QUANTILES = (0.5, 0.9, 0.99)


@dataclass(frozen=True)
class SweepRow:
    """Summary of one (column, density) cell of a dataset sweep."""

    column: int
    K: int
    scheme: Scheme
    p: float
    mean_abs: float
    rms: float
    quantiles: tuple[float, ...]


@dataclass(frozen=True)
class DatasetSweep:
    """Sweep rows in (column, density) order and the number of skipped zero columns."""

    rows: tuple[SweepRow, ...]
    skipped: int


def dataset_distortion_sweep(
    columns: Sequence,
    m: int,
    densities: Sequence[float] = (1.0,),
    trials: int = 1000,
    seed: int = 0,
    workers: int = DEFAULT_WORKERS,
) -> DatasetSweep:
    """Simulate every nonzero column under every density.

    Density 1 uses the dense scheme, smaller densities the sparse one. Cell
    ``(j, d)`` is seeded with ``trial_seed(seed, j, d)``.
    """
    rows = []
    skipped = 0
    for j, column in enumerate(columns):
        x = np.asarray(column, dtype=np.float64).ravel()
        if not np.any(x):
            logger.warning("skipping zero column %s", j)
            skipped += 1
            continue
        for d, p in enumerate(densities):
            sample = simulate_distortion(
                x, m, scheme_for_density(p), p, trials, trial_seed(seed, j, d), workers
            )
            rows.append(
                SweepRow(
                    column=j,
                    K=sample.K,
                    scheme=sample.scheme,
                    p=sample.p,
                    mean_abs=math.fsum(np.abs(sample.values).tolist()) / sample.trials,
                    rms=math.sqrt(sample.second_moment()),
                    quantiles=tuple(sample.quantiles(SWEEP_QUANTILES)),
                )
            )
    if not rows:
        raise ValueError("all columns are zero")
    if skipped:
        logger.warning("skipped %s zero columns", skipped)
    return DatasetSweep(rows=tuple(rows), skipped=skipped)
