from itertools import chain

import numpy as np
import pytest

from phaseinj.errors import GuardExceeded
from phaseinj.numerics import batch_ranks, fast_rank
from phaseinj.subsets import (
    canonical_order_key,
    check_subset_guard,
    complement,
    count_symmetric_subsets,
    symmetric_subset_blocks,
    symmetric_subsets,
)


@pytest.mark.parametrize("n", range(1, 11))
def test_one_per_complementary_pair(n):
    subs = list(symmetric_subsets(n))
    assert len(subs) == count_symmetric_subsets(n) == 2 ** (n - 1) - 1
    keys = {frozenset(s) for s in subs} | {frozenset(complement(s, n)) for s in subs}
    assert len(keys) == 2 * len(subs)


@pytest.mark.parametrize("n", range(1, 11))
def test_canonical_order(n):
    subs = list(symmetric_subsets(n))
    assert subs == sorted(subs, key=canonical_order_key)


@pytest.mark.parametrize("n,block", [(5, 3), (8, 7), (9, 4096)])
def test_blocks_match_plain_enumeration(n, block):
    blocks = list(symmetric_subset_blocks(n, block))
    flat = list(chain.from_iterable(tuple(map(tuple, s.tolist())) for s, _ in blocks))
    assert flat == list(symmetric_subsets(n))
    for subs, comps in blocks:
        assert len(subs) <= block
        for s, c in zip(subs.tolist(), comps.tolist()):
            assert tuple(c) == complement(s, n)


def test_guard():
    check_subset_guard(24)
    with pytest.raises(GuardExceeded):
        check_subset_guard(25)


def test_batch_ranks_match_single(rng):
    a = rng.standard_normal((3, 7))
    a[:, 4] = a[:, 0] + a[:, 1]
    a[:, 5] = 0.0
    for subs, comps in symmetric_subset_blocks(7):
        for idx in (subs, comps):
            expected = [fast_rank(a[:, list(i)]) for i in idx]
            assert batch_ranks(a, idx).tolist() == expected


def test_batch_ranks_empty():
    a = np.eye(2)
    assert batch_ranks(a, np.zeros((3, 0), dtype=int)).tolist() == [0, 0, 0]
    assert batch_ranks(a, np.zeros((0, 2), dtype=int)).tolist() == []
