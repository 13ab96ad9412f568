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

"""Streaming MatrixMarket reader"""

from __future__ import annotations

import hashlib
import math
from logging import getLogger
from pathlib import Path
from typing import Iterator

import numpy as np
from scipy import sparse

from .dataset import DataFormatError, SparseDataset

logger = getLogger(__name__)

SUPPORTED_FORMATS = ("coordinate", "array")
SUPPORTED_FIELDS = ("real", "pattern")
SUPPORTED_SYMMETRIES = ("general", "symmetric", "skew-symmetric")


def _numbered_lines(path: Path, digest) -> Iterator[tuple[int, str]]:
    with open(path, "rb") as mtx_file:
        for number, raw in enumerate(mtx_file, start=1):
            digest.update(raw)
            try:
                yield number, raw.decode("utf-8").strip()
            except UnicodeDecodeError as err:
                raise DataFormatError("invalid UTF-8", path, number) from err


def _parse_banner(path: Path, number: int, line: str) -> tuple[str, str, str]:
    tokens = line.lower().split()
    if len(tokens) != 5 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
        raise DataFormatError("malformed banner", path, number)
    layout, field, symmetry = tokens[2:]
    if layout not in SUPPORTED_FORMATS:
        raise DataFormatError(f"unsupported format '{layout}'", path, number)
    if field not in SUPPORTED_FIELDS:
        raise DataFormatError(f"unsupported field '{field}'", path, number)
    if symmetry not in SUPPORTED_SYMMETRIES:
        raise DataFormatError(f"unsupported symmetry '{symmetry}'", path, number)
    if field == "pattern" and layout == "array":
        raise DataFormatError("pattern field requires coordinate format", path, number)
    return layout, field, symmetry


def _parse_int(token: str, path: Path, number: int, column: int) -> int:
    try:
        return int(token)
    except ValueError as err:
        raise DataFormatError(f"non-integer index '{token}'", path, number, column) from err


def _parse_value(token: str, path: Path, number: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError as err:
        raise DataFormatError(f"non-numeric value '{token}'", path, number, column) from err
    if not math.isfinite(value):
        raise DataFormatError(f"non-finite value '{token}'", path, number, column)
    return value


def _array_positions(rows: int, cols: int, symmetry: str) -> Iterator[tuple[int, int]]:
    """Column-major positions of the stored array entries (lower triangle when symmetric)."""
    for j in range(cols):
        if symmetry == "general":
            start = 0
        elif symmetry == "symmetric":
            start = j
        else:
            start = j + 1
        for i in range(start, rows):
            yield i, j


def read_matrix_market(path, name: str | None = None) -> SparseDataset:
    """Load a MatrixMarket file into a column store.

    Coordinate entries are converted to 0-based positions and duplicates are
    summed. Symmetric and skew-symmetric files are expanded to the full
    matrix. Entries stored as 0 are dropped and counted.

    Args:
        path: File path.
        name: Dataset name, the file stem by default.

    Returns:
        SparseDataset: the loaded matrix.

    Raises:
        DataFormatError: for a malformed banner, size line or entry.
    """
    path = Path(path)
    digest = hashlib.sha256()
    lines = _numbered_lines(path, digest)

    first = next(lines, None)
    if first is None:
        raise DataFormatError("empty file", path, 1)
    layout, field, symmetry = _parse_banner(path, *first)

    size = None
    for number, line in lines:
        if line and not line.startswith("%"):
            size = (number, line.split())
            break
    if size is None:
        raise DataFormatError("missing size line", path, first[0] + 1)
    size_line, tokens = size
    expected_tokens = 3 if layout == "coordinate" else 2
    if len(tokens) != expected_tokens:
        raise DataFormatError("malformed size line", path, size_line)
    dims = [_parse_int(t, path, size_line, k + 1) for k, t in enumerate(tokens)]
    n_rows, n_cols = dims[0], dims[1]
    if n_rows < 1 or n_cols < 1:
        raise DataFormatError("dimensions must be positive", path, size_line)
    if symmetry != "general" and n_rows != n_cols:
        raise DataFormatError(f"{symmetry} matrix must be square", path, size_line)

    if layout == "coordinate":
        declared = dims[2]
        positions = None
        value_tokens = 2 if field == "pattern" else 3
    else:
        positions = _array_positions(n_rows, n_cols, symmetry)
        declared = {
            "general": n_rows * n_cols,
            "symmetric": n_rows * (n_rows + 1) // 2,
            "skew-symmetric": n_rows * (n_rows - 1) // 2,
        }[symmetry]
        value_tokens = 1

    row_idx: list[int] = []
    col_idx: list[int] = []
    values: list[float] = []
    explicit_zeros = 0
    seen = 0
    last_line = size_line
    for number, line in lines:
        last_line = number
        if not line or line.startswith("%"):
            continue
        tokens = line.split()
        if len(tokens) != value_tokens:
            raise DataFormatError(
                f"expected {value_tokens} fields, found {len(tokens)}", path, number
            )
        seen += 1
        if seen > declared:
            raise DataFormatError(f"more than {declared} entries", path, number)
        if positions is None:
            i = _parse_int(tokens[0], path, number, 1)
            j = _parse_int(tokens[1], path, number, 2)
            if not (1 <= i <= n_rows and 1 <= j <= n_cols):
                raise DataFormatError(f"coordinate ({i}, {j}) out of range", path, number)
            i, j = i - 1, j - 1
            value = 1.0 if field == "pattern" else _parse_value(tokens[2], path, number, 3)
            if symmetry != "general" and j > i:
                raise DataFormatError(
                    "entry above the diagonal in a symmetric file", path, number
                )
        else:
            i, j = next(positions)
            value = _parse_value(tokens[0], path, number, 1)
        if value == 0.0:
            explicit_zeros += 1
            continue
        row_idx.append(i)
        col_idx.append(j)
        values.append(value)
        if symmetry != "general" and i != j:
            row_idx.append(j)
            col_idx.append(i)
            values.append(value if symmetry == "symmetric" else -value)
    if seen < declared:
        raise DataFormatError(f"expected {declared} entries, found {seen}", path, last_line)

    matrix = sparse.coo_matrix(
        (
            np.asarray(values, dtype=np.float64),
            (np.asarray(row_idx, dtype=np.int64), np.asarray(col_idx, dtype=np.int64)),
        ),
        shape=(n_rows, n_cols),
    ).tocsc()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()
    logger.debug(
        "loaded %s: %sx%s nnz=%s explicit_zeros=%s",
        path,
        n_rows,
        n_cols,
        matrix.nnz,
        explicit_zeros,
    )
    return SparseDataset(
        name=name or path.stem,
        matrix=matrix,
        path=str(path),
        checksum=digest.hexdigest(),
        explicit_zeros=explicit_zeros,
    )
