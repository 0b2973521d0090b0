import math
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growth1324.combinatorics import embed_blue_nonroot, embed_forest, forest_codes, tree_codes
from growth1324.patterns import (
    avoids_1324_rows,
    contains_1324_naive,
    contains_pattern,
    guard_threshold,
    q_block,
    q_count,
    shuffles,
)


def test_contains_basic():
    assert contains_pattern([1, 3, 2, 4], [1, 3, 2, 4])
    assert contains_pattern([2, 5, 3, 6, 1], [1, 3, 2, 4])
    assert not contains_pattern([4, 3, 2, 1], [1, 3, 2, 4])
    assert contains_pattern([3, 1, 2], [2, 1])
    with pytest.raises(ValueError):
        contains_pattern([1, 2], [])


@given(st.permutations(list(range(1, 8))))
@settings(max_examples=300, deadline=None)
def test_guarded_containment_matches_naive(perm):
    assert contains_pattern(perm, [1, 3, 2, 4]) == contains_1324_naive(perm)


def test_guard_threshold():
    assert guard_threshold([1, 3, 2]) == 3
    assert guard_threshold([1, 2, 3]) == math.inf
    assert guard_threshold([2, 4, 3]) == 4
    assert guard_threshold([1, 3, 2, 4], strict=False) is None


@pytest.mark.parametrize("tree,forest,q", [
    ("((()()))", "()(())", 15),
    ("(())", "(())", 3),
    ("(())", "()", 2),
    ("()", "()()", 1),
    ("((()))", "", 1),
])
def test_q_values(tree, forest, q):
    assert q_count(tree, forest) == q
    assert q_count(tree, forest, "naive") == q


def test_q_unknown_mode():
    with pytest.raises(ValueError):
        q_count("(())", "()", "fast")


def test_shuffle_count():
    seqs = list(shuffles("((()()))", "()(())"))
    assert len(seqs) == math.comb(6, 3)
    # value 4 = |T| is reserved for the blue root
    assert all(sorted(s) == [1, 2, 3, 5, 6, 7] for s in seqs)
    rooted = list(shuffles("((()()))", "()(())", with_root=True))
    assert all(sorted(s) == list(range(1, 8)) and s[-1] == 4 for s in rooted)


def test_avoids_rows():
    perms = np.array(list(permutations(range(1, 6))))
    got = avoids_1324_rows(perms)
    want = np.array([not contains_1324_naive(p) for p in perms])
    assert np.array_equal(got, want) and got.sum() == 103


@pytest.mark.parametrize("i,m", [(2, 1), (3, 3), (4, 4), (5, 3), (6, 2)])
def test_q_block_numba_matches_numpy(i, m):
    blue = np.array([embed_blue_nonroot(c) for c in tree_codes(i)], dtype=np.int64)
    red = np.array([embed_forest(c) for c in forest_codes(m)], dtype=np.int64)
    a = q_block(blue, red, use_numba=True)
    b = q_block(blue, red, use_numba=False)
    assert np.array_equal(a, b)
    assert a.dtype == np.int64 and len(a) == len(blue) * len(red)
