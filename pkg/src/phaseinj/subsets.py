"""Deterministic subset enumeration with explicit guards.

Subsets are visited smallest first and lexicographically within a size, so
the first failing subset found is the canonical witness no matter how the
search is organized.  Only |S| <= N // 2 is visited when the tested property
is symmetric under S <-> S^c.
"""
from __future__ import annotations

from itertools import combinations, groupby, islice
from math import comb

import numpy as np

from .errors import GuardExceeded

DEFAULT_SUBSET_GUARD = 24  # largest N for 2^(N-1)-subset enumeration
DEFAULT_MINOR_GUARD = 10**6


def check_subset_guard(n: int, guard: int = DEFAULT_SUBSET_GUARD) -> None:
    if n > guard:
        raise GuardExceeded(
            f"N={n} needs 2^{n - 1} subset checks; the guard allows N <= {guard}"
        )


def symmetric_subsets(n: int, include_empty: bool = False):
    """Yield index tuples S with |S| <= n // 2, modulo S <-> S^c.

    When n is even and |S| = n/2, only the member of each complementary pair
    containing index 0 is yielded.
    """
    start = 0 if include_empty else 1
    for size in range(start, n // 2 + 1):
        for s in combinations(range(n), size):
            if 2 * size == n and s[0] != 0:
                continue
            yield s


def symmetric_subset_blocks(n: int, block: int = 4096, include_empty: bool = False):
    """Yield ``(subsets, complements)`` index arrays of at most ``block`` rows,
    all of one size, in the same order as :func:`symmetric_subsets`."""
    it = symmetric_subsets(n, include_empty)
    for size, group in groupby(it, key=len):
        while True:
            subs = list(islice(group, block))
            if not subs:
                break
            comps = [complement(t, n) for t in subs]
            yield np.array(subs, dtype=int).reshape(len(subs), size), np.array(comps, dtype=int).reshape(len(subs), n - size)


def count_symmetric_subsets(n: int, include_empty: bool = False) -> int:
    total = sum(comb(n, k) for k in range(0 if include_empty else 1, n // 2 + 1))
    if n % 2 == 0 and n > 0:
        total -= comb(n, n // 2) // 2
    return total


def complement(s, n: int) -> tuple[int, ...]:
    members = set(s)
    return tuple(i for i in range(n) if i not in members)


def canonical_order_key(s) -> tuple:
    return (len(s), tuple(sorted(s)))
