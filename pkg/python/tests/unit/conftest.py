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

"""Shared fixtures for unit tests."""

from pathlib import Path

import pytest

from radproj.moments import chaos_moment_table, distortion_moment_table


@pytest.fixture
def fixtures() -> Path:
    """Directory holding the bundled data files."""
    return Path(__file__).parent / "dataio" / "fixtures"


@pytest.fixture(autouse=True)
def _clear_radproj_env(monkeypatch):
    """Run every test without RADPROJ_* overrides from the calling shell."""
    for name in (
        "RADPROJ_ENUM_CAP",
        "RADPROJ_ATOM_CAP",
        "RADPROJ_WORKERS",
        "RADPROJ_QMAX",
        "RADPROJ_DENSITIES",
        "RADPROJ_LIST_DELIMITER",
        "RADPROJ_DEBUG",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def fresh_tables():
    """Drop memoised moment tables before and after a test."""
    chaos_moment_table.cache_clear()
    distortion_moment_table.cache_clear()
    yield
    chaos_moment_table.cache_clear()
    distortion_moment_table.cache_clear()
