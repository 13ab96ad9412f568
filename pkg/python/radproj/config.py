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

"""Process-level defaults read from the environment"""

import os
from dataclasses import dataclass, replace
from logging import getLogger

logger = getLogger("radproj")

DEFAULT_ENUM_CAP = 20
DEFAULT_ATOM_CAP = 1_000_000
DEFAULT_WORKERS = 1
DEFAULT_QMAX = 32
DEFAULT_DENSITIES = (1.0,)

# exact arithmetic is used up to these sizes, floats beyond
EXACT_K_LIMIT = 10_000
EXACT_Q_LIMIT = 64


def _get_env_int(envvar_name: str, default: int, minimum: int = 1) -> int:
    """Return an integer environment variable.

    Args:
        envvar_name (str): Environment variable name.
        default (int): Value used when the variable is not set or empty.
        minimum (int): Smallest accepted value.

    Returns:
        (int): The parsed value.
    """
    value = os.environ.get(envvar_name)
    if value is None or len(value.strip()) == 0:
        return default
    try:
        parsed = int(value)
    except ValueError as err:
        raise ValueError(
            f"The environment variable `{envvar_name}` must be an integer, got {value!r}."
        ) from err
    if parsed < minimum:
        raise ValueError(
            f"The environment variable `{envvar_name}` must be >= {minimum}, got {parsed}."
        )
    return parsed


def get_env_list(envvar_name: str) -> list[str]:
    """Return a list-valued environment variable, empty when unset.

    Args:
        envvar_name (str): Environment variable name.

    Returns:
        (list[str]): Values split with ``RADPROJ_LIST_DELIMITER`` (default ``,``).
    """
    values = os.environ.get(envvar_name)
    if values is None:
        return []
    sep = os.environ.get(key="RADPROJ_LIST_DELIMITER", default=",")
    return [] if len(values) == 0 else [v.strip() for v in values.split(sep)]


def _get_env_densities(envvar_name: str) -> tuple[float, ...]:
    """Return projection densities in (0, 1], the default when unset."""
    values = get_env_list(envvar_name)
    if not values:
        return DEFAULT_DENSITIES
    try:
        densities = tuple(float(v) for v in values)
    except ValueError as err:
        raise ValueError(
            f"The environment variable `{envvar_name}` must list numbers, got {values!r}."
        ) from err
    if any(not 0 < p <= 1 for p in densities):
        raise ValueError(
            f"The environment variable `{envvar_name}` must list densities in (0, 1]."
        )
    return densities


@dataclass(frozen=True)
class Settings:
    """Resource limits and defaults shared by the oracle, simulator and CLI."""

    enum_cap: int = DEFAULT_ENUM_CAP
    """Largest support size enumerated over all sign vectors."""

    atom_cap: int = DEFAULT_ATOM_CAP
    """Largest number of atoms an exact convolved law may hold."""

    workers: int = DEFAULT_WORKERS
    """Worker threads for enumeration chunks and simulation trials."""

    qmax: int = DEFAULT_QMAX
    """Largest even moment order used by the tail-bound optimizer."""

    densities: tuple[float, ...] = DEFAULT_DENSITIES
    """Projection densities simulated when none are given explicitly."""

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from ``RADPROJ_*`` environment variables."""
        settings = cls(
            enum_cap=_get_env_int("RADPROJ_ENUM_CAP", DEFAULT_ENUM_CAP),
            atom_cap=_get_env_int("RADPROJ_ATOM_CAP", DEFAULT_ATOM_CAP),
            workers=_get_env_int("RADPROJ_WORKERS", DEFAULT_WORKERS),
            qmax=_get_env_int("RADPROJ_QMAX", DEFAULT_QMAX, minimum=2),
            densities=_get_env_densities("RADPROJ_DENSITIES"),
        )
        if settings.qmax % 2 != 0:
            raise ValueError(
                f"The environment variable `RADPROJ_QMAX` must be even, got {settings.qmax}."
            )
        logger.debug("settings: %s", settings)
        return settings

    def override(self, **fields) -> "Settings":
        """Return a copy with the given non-``None`` fields replaced."""
        changes = {key: value for key, value in fields.items() if value is not None}
        return replace(self, **changes) if changes else self
