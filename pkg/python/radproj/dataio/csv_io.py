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

"""CSV vectors in, result tables out"""

from __future__ import annotations

import csv
import sys
from fractions import Fraction
from logging import getLogger
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .dataset import DataFormatError
from .matrix_market import read_matrix_market

logger = getLogger(__name__)


def _parse_cell(cell: str, path, line: int, column: int) -> float:
    text = cell.strip()
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as err:
        raise DataFormatError(f"non-numeric cell '{cell}'", path, line, column) from err


def read_csv_vectors(path, has_header: bool = False, by_rows: bool = False) -> list[np.ndarray]:
    """Read a rectangular numeric CSV as vectors.

    Lines starting with ``#`` and blank lines are skipped. Cells may be
    decimal floats or ``p/q`` rationals.

    Args:
        path: CSV file.
        has_header: Skip the first non-comment row.
        by_rows: Return one vector per row instead of per column.

    Returns:
        list[np.ndarray]: float64 vectors.

    Raises:
        DataFormatError: for an empty file, ragged rows or non-numeric cells.
    """
    rows: list[list[float]] = []
    width = None
    header_pending = has_header
    last_line = 0
    with open(path, encoding="utf-8", newline="") as csv_file:
        for number, text in enumerate(csv_file, start=1):
            last_line = number
            if not text.strip() or text.startswith("#"):
                continue
            cells = next(csv.reader([text]))
            if header_pending:
                header_pending = False
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise DataFormatError(
                    f"ragged row: expected {width} cells, found {len(cells)}", path, number
                )
            rows.append([_parse_cell(cell, path, number, k + 1) for k, cell in enumerate(cells)])
    if not rows:
        raise DataFormatError("empty file", path, max(last_line, 1))
    table = np.asarray(rows, dtype=np.float64)
    logger.debug("read %s: %sx%s", path, *table.shape)
    vectors = table if by_rows else table.T
    return [np.array(v) for v in vectors]


def read_vectors(path, has_header: bool = False, by_rows: bool = False) -> list[np.ndarray]:
    """Read vectors from a MatrixMarket (``.mtx``) or CSV file.

    MatrixMarket matrices always yield their columns.
    """
    if Path(path).suffix.lower() == ".mtx":
        return read_matrix_market(path).columns()
    return read_csv_vectors(path, has_header=has_header, by_rows=by_rows)


def format_cell(value) -> str:
    """Render a cell: floats with round-trip precision, integral rationals as integers."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return repr(float(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _exact_columns(rows: Sequence[Sequence]) -> set[int]:
    return {k for row in rows for k, value in enumerate(row) if isinstance(value, Fraction)}


def write_csv(
    rows: Iterable[Sequence],
    path=None,
    header: Sequence[str] = (),
    comments: Sequence[str] = (),
    exact: bool = False,
) -> None:
    """Write a table as CSV with LF line endings.

    Args:
        rows: Table rows; cells may be ints, floats, fractions or strings.
        path: Output file, or an open text stream; stdout when ``None``.
        header: Column names.
        comments: Lines written first, each prefixed with ``# ``.
        exact: After every column holding fractions add ``<name>_exact``
            with the ``p/q`` value.
    """
    rows = [list(row) for row in rows]
    width = len(header) if header else (len(rows[0]) if rows else 0)
    for row in rows:
        if len(row) != width:
            raise ValueError(f"table is not rectangular: expected {width} cells, found {len(row)}")
    exact_cols = sorted(_exact_columns(rows)) if exact else []

    out_header = []
    for k, name in enumerate(header):
        out_header.append(name)
        if k in exact_cols:
            out_header.append(f"{name}_exact")

    def render(row):
        cells = []
        for k, value in enumerate(row):
            cells.append(format_cell(value))
            if k in exact_cols:
                cells.append(str(Fraction(value)))
        return cells

    def emit(stream: TextIO):
        for comment in comments:
            stream.write(f"# {comment}\n")
        writer = csv.writer(stream, lineterminator="\n")
        if out_header:
            writer.writerow(out_header)
        for row in rows:
            writer.writerow(render(row))

    if path is None:
        emit(sys.stdout)
    elif hasattr(path, "write"):
        emit(path)
    else:
        with open(path, "w", encoding="utf-8", newline="") as csv_file:
            emit(csv_file)
