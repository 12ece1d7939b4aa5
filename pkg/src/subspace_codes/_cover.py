"""Greedy and exact minimum set cover over small universes.

Sets and coverage states are Python ints used as bitmasks over point indices.
"""

from __future__ import annotations

import heapq
from typing import Sequence


class SearchLimitError(RuntimeError):
    """Raised when an exact search exceeds its node budget."""


def greedy_cover(sets: Sequence[int], universe: int, initial: Sequence[int] = ()) -> list[int]:
    """Indices of a greedy max-coverage cover of ``universe``.

    Ties go to the lowest index.  ``initial`` indices are taken first.
    """
    chosen = list(initial)
    covered = 0
    for i in chosen:
        covered |= sets[i]
    heap = [(-bin(s & ~covered & universe).count("1"), i) for i, s in enumerate(sets)]
    heapq.heapify(heap)
    while covered & universe != universe:
        g, i = heapq.heappop(heap)
        gain = bin(sets[i] & ~covered & universe).count("1")
        if gain != -g:
            if gain:
                heapq.heappush(heap, (-gain, i))
            continue
        chosen.append(i)
        covered |= sets[i]
    return chosen


def exact_min_cover(sets: Sequence[int], universe: int, lower: int = 1, upper: int | None = None,
                    fixed: int | None = None, node_limit: int = 10 ** 7) -> list[int]:
    """A minimum-size cover by iterative deepening.

    ``fixed`` forces one set into the cover; valid when a transitive symmetry
    group acts on the points and sets compatibly.
    """
    npts = universe.bit_length()
    covers: list[list[int]] = [[] for _ in range(npts)]
    for i, s in enumerate(sets):
        x = s & universe
        while x:
            low = x & -x
            covers[low.bit_length() - 1].append(i)
            x ^= low
    maxsize = max(bin(s & universe).count("1") for s in sets)
    nodes = 0

    def dfs(covered: int, left: int, acc: list[int]) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise SearchLimitError(f"exact cover search exceeded {node_limit} nodes")
        unc = universe & ~covered
        if not unc:
            return acc
        if left == 0 or bin(unc).count("1") > left * maxsize:
            return None
        p = (unc & -unc).bit_length() - 1
        for i in covers[p]:
            res = dfs(covered | sets[i], left - 1, acc + [i])
            if res is not None:
                return res
        return None

    start = [fixed] if fixed is not None else []
    base = sets[fixed] if fixed is not None else 0
    K = max(lower, len(start), 1)
    while upper is None or K <= upper:
        res = dfs(base, K - len(start), start)
        if res is not None:
            return res
        K += 1
    raise SearchLimitError(f"no cover of size <= {upper}")


def covered_all(sets: Sequence[int], chosen: Sequence[int], universe: int) -> bool:
    acc = 0
    for i in chosen:
        acc |= sets[i]
    return acc & universe == universe
