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

"""Integer partitions in frequency notation"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, perm, prod
from typing import Iterator


@dataclass(frozen=True)
class Partition:
    """A partition of ``q`` into non-increasing positive parts."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(part < 1 for part in parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError("parts must be non-increasing")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        """The partitioned integer q."""
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of parts."""
        return len(self.parts)

    def frequencies(self) -> dict[int, int]:
        """Map part -> multiplicity."""
        return dict(Counter(self.parts))

    def multinomial(self) -> int:
        """``q! / prod(parts!)``: ways to distribute q labelled factors over the parts."""
        return factorial(self.total) // prod(factorial(part) for part in self.parts)

    def arrangements(self, slots: int) -> int:
        """``slots! / ((slots - length)! * prod(f_j!))``: placements of the parts on slots."""
        if self.length > slots:
            return 0
        return perm(slots, self.length) // prod(
            factorial(f) for f in self.frequencies().values()
        )

    def __str__(self) -> str:
        return "(" + ",".join(str(part) for part in self.parts) + ")"


def partitions(q: int, min_part: int = 1, max_length: int | None = None) -> Iterator[Partition]:
    """Yield the partitions of ``q`` in descending lexicographic order.

    Args:
        q: Nonnegative integer to partition; ``q = 0`` yields the empty partition.
        min_part: Smallest allowed part.
        max_length: Largest allowed number of parts, unbounded when ``None``.
    """
    if q < 0:
        raise ValueError("cannot partition a negative integer")
    if min_part < 1:
        raise ValueError("min_part must be positive")
    for parts in _descending(q, q, min_part, max_length):
        yield Partition(parts)


@lru_cache(maxsize=None)
def _descending(
    remaining: int, largest: int, min_part: int, max_length: int | None
) -> tuple[tuple[int, ...], ...]:
    if remaining == 0:
        return ((),)
    if max_length is not None and max_length <= 0:
        return ()
    out = []
    shorter = None if max_length is None else max_length - 1
    for head in range(min(remaining, largest), min_part - 1, -1):
        for tail in _descending(remaining - head, head, min_part, shorter):
            out.append((head,) + tail)
    return tuple(out)
