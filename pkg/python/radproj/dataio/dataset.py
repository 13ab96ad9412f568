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

"""Sparse datasets and column statistics"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse


class DataFormatError(ValueError):
    """Malformed input file, located by path, line and optional column."""

    def __init__(self, message: str, path, line: int, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.path = str(path)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.path}:{self.line}: {self.message}"


@dataclass(frozen=True)
class SparseDataset:
    """A loaded matrix whose columns serve as test vectors."""

    name: str
    matrix: sparse.csc_matrix
    path: str
    checksum: str
    """SHA-256 of the raw file bytes."""

    explicit_zeros: int = 0
    """Entries stored in the file with value 0, which are dropped."""

    @property
    def rows(self) -> int:
        """Vector dimension."""
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        """Number of column vectors."""
        return self.matrix.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Column ``j`` as a dense float64 vector."""
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} outside 0..{self.cols - 1}")
        start, stop = self.matrix.indptr[j], self.matrix.indptr[j + 1]
        out = np.zeros(self.rows)
        out[self.matrix.indices[start:stop]] = self.matrix.data[start:stop]
        return out

    def column_nnz(self) -> np.ndarray:
        """Per-column count of stored nonzeros (the sparsity K)."""
        return np.diff(self.matrix.indptr)

    def nonzero_columns(self) -> list[int]:
        """Indices of the columns holding at least one nonzero."""
        return [int(j) for j in np.flatnonzero(self.column_nnz())]

    def columns(self) -> list[np.ndarray]:
        """All columns as dense vectors."""
        return [self.column(j) for j in range(self.cols)]


@dataclass(frozen=True)
class ColumnStats:
    """Sparsity and spread of one vector."""

    column: int
    K: int
    norm: float
    flatness: float
    """``(sum x^2)^2 / (K sum x^4)``, 0 for a zero vector."""


def flatness_ratio(vector) -> float:
    """Return ``(sum x_i^2)^2 / (K * sum x_i^4)``, which is 1 iff all nonzero ``|x_i|`` are equal.

    Raises:
        ValueError: for a zero vector.
    """
    x = np.asarray(vector, dtype=np.float64).ravel()
    nonzero = x[x != 0]
    if nonzero.size == 0:
        raise ValueError("zero vector")
    squares = nonzero * nonzero
    second = math.fsum(squares.tolist())
    fourth = math.fsum((squares * squares).tolist())
    return min(1.0, second * second / (nonzero.size * fourth))


def vector_stats(vectors) -> list[ColumnStats]:
    """Statistics of each vector, zero vectors reported with ``K = 0``."""
    stats = []
    for j, vector in enumerate(vectors):
        x = np.asarray(vector, dtype=np.float64).ravel()
        K = int(np.count_nonzero(x))
        if K == 0:
            stats.append(ColumnStats(column=j, K=0, norm=0.0, flatness=0.0))
            continue
        norm = math.sqrt(math.fsum((x * x).tolist()))
        stats.append(ColumnStats(column=j, K=K, norm=norm, flatness=flatness_ratio(x)))
    return stats


def sparsity_stats(dataset: SparseDataset) -> list[ColumnStats]:
    """Per-column K, l2 norm and flatness ratio, in column order."""
    return vector_stats(dataset.columns())
