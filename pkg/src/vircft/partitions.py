"""Integer partitions indexing the graded bases.

A partition is a plain weakly decreasing tuple of positive ints; ``()`` is
the highest weight vector / vacuum.
"""
from __future__ import annotations

from functools import lru_cache

Partition = tuple[int, ...]


def weight(p: Partition) -> int:
    return sum(p)


def is_partition(p, min_part: int = 1) -> bool:
    return all(isinstance(x, int) and x >= min_part for x in p) and all(
        p[i] >= p[i + 1] for i in range(len(p) - 1)
    )


@lru_cache(maxsize=None)
def partitions_of(n: int, min_part: int = 1, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of ``n`` with parts in ``[min_part, max_part]``.

    Canonical order is descending lexicographic: ``[(2,), (1, 1)]`` for n=2.
    """
    if n < 0:
        return ()
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), min_part - 1, -1):
        for rest in partitions_of(n - first, min_part, first):
            out.append((first,) + rest)
    return tuple(out)


def partition_count(n: int, min_part: int = 1) -> int:
    return len(partitions_of(n, min_part))
