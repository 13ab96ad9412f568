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

"""Dataset ingestion and CSV output"""

from .dataset import (
    ColumnStats,
    DataFormatError,
    SparseDataset,
    flatness_ratio,
    sparsity_stats,
    vector_stats,
)
from .matrix_market import read_matrix_market
from .csv_io import format_cell, read_csv_vectors, read_vectors, write_csv

__all__ = [
    "ColumnStats",
    "DataFormatError",
    "SparseDataset",
    "flatness_ratio",
    "format_cell",
    "read_csv_vectors",
    "read_matrix_market",
    "read_vectors",
    "sparsity_stats",
    "vector_stats",
    "write_csv",
]
