from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from growth1324.combinatorics import forest_codes, hasse_graph, tree_codes, tree_from_hasse
from growth1324.errors import DomainError, ResourceError
from growth1324.oracle import (
    WParams,
    all_avoid_1324,
    build_W0,
    count_avoiders,
    count_avoiders_naive,
    empirical_means,
    enumerate_W0,
    exact_forest_path_count,
    fringe_occurrences,
    fringe_plus_occurrences,
    fringe_profile,
    random_tree,
    red_forest,
    sample_W0,
)
from growth1324.combinatorics import forest_to_luka_path, tree_to_luka_path
from growth1324.lukasiewicz import count_occurrences
from growth1324.series import finite_moments

import numpy as np

AV = [1, 2, 6, 23, 103, 513, 2762, 15793]


def test_avoider_counts():
    assert [count_avoiders(n) for n in range(1, 9)] == AV
    assert [count_avoiders_naive(n) for n in range(1, 9)] == AV
    assert count_avoiders(10) == 591950
    with pytest.raises(ResourceError):
        count_avoiders(11)
    with pytest.raises(ResourceError):
        count_avoiders_naive(9)


def test_w0_smallest_case():
    els = list(enumerate_W0(WParams(1, 2, 2, 1)))
    perms = {e.perm for e in els}
    assert len(perms) == 4 and all(len(p) == 6 for p in perms)
    assert all_avoid_1324(els)


@pytest.mark.parametrize("p", [(1, 3, 3, 2), (2, 2, 2, 1), (1, 3, 3, 1), (1, 2, 4, 2), (1, 3, 2, 1)])
def test_w0_count_formula(p):
    wp = WParams(*p)
    els = list(enumerate_W0(wp))
    assert len({e.perm for e in els}) == wp.count_formula
    assert all_avoid_1324(els)


def test_wparams_validation():
    with pytest.raises(DomainError):
        WParams(0, 2, 2, 1)
    with pytest.raises(DomainError):
        WParams(1, 2, 3, 3)
    with pytest.raises(ResourceError):
        list(enumerate_W0(WParams(2, 4, 4, 2)))


def test_build_W0_argument_shapes():
    with pytest.raises(DomainError):
        build_W0(["(())"], ["(())"], [(0,)], [(0,)])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_sample_structure(seed):
    (e,) = sample_W0(WParams(2, 3, 4, 2), 1, seed)
    assert all_avoid_1324([e])
    assert set(e.tree_edges) <= hasse_graph(e.perm)
    assert [tree_from_hasse(e.perm, r).code for r in e.red_roots] == list(e.red)


def test_sampling_is_deterministic():
    p = WParams(3, 4, 4, 2)
    assert sample_W0(p, 3, 11) == sample_W0(p, 3, 11)
    assert sample_W0(p, 3, 11) != sample_W0(p, 3, 12)


def test_random_tree_uniform():
    rng = np.random.default_rng(0)
    counts: dict[str, int] = {}
    for _ in range(14000):
        c = random_tree(rng, 5)
        counts[c] = counts.get(c, 0) + 1
    assert set(counts) == set(tree_codes(5))
    assert max(counts.values()) < 1.15 * 1000 and min(counts.values()) > 0.85 * 1000


def test_fringe_examples():
    # root with three leaves: the root qualifies for F = "" (h = 0) and F = "()" (h = 1)
    assert fringe_occurrences("(()()())", "") == 1
    assert fringe_occurrences("(()()())", "()") == 1
    assert fringe_occurrences("(()()())", "()()") == 1
    assert fringe_occurrences("(()()())", "()()()") == 0
    assert fringe_plus_occurrences("(()()())", "()") == 2
    assert red_forest("(()()())", 3) == [1, 2]
    with pytest.raises(DomainError):
        red_forest("(())", 0)


@pytest.mark.parametrize("k", range(1, 8))
def test_fringe_bijection(k):
    for t in tree_codes(k):
        path = tree_to_luka_path(t)
        rho, plus = fringe_profile(t, 3)
        for m in range(1, 4):
            for f in forest_codes(m):
                w = forest_to_luka_path(f)
                assert plus.get(f, 0) == fringe_plus_occurrences(t, f) == count_occurrences(path, w, "skip-first")
                h = len(w) and sum(w)
                assert rho.get(f, 0) == fringe_occurrences(t, f) == exact_forest_path_count(path, w, h)


def test_empirical_means():
    assert empirical_means("beta", ell=5, d=2, tree="()").prop_mean == Fraction(2, 5)
    assert empirical_means("gamma", k=3, d=2, j=0).prop_mean == Fraction(1, 2)
    rho = [empirical_means("rho", k=k, forest="()").prop_mean for k in range(4, 11)]
    assert all(a > b > Fraction(1, 8) for a, b in zip(rho, rho[1:]))
    for k in range(2, 8):
        assert empirical_means("rho_plus", k=k, forest="()()").prop_mean == \
            finite_moments("L", k, pattern=(1, 1)).prop_mean
    with pytest.raises(DomainError):
        empirical_means("nope", k=3)
    with pytest.raises(ResourceError):
        empirical_means("rho", k=12, forest="()")
