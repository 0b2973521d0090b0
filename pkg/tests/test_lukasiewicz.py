from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growth1324.errors import DomainError, InputParseError, ResourceError
from growth1324.lukasiewicz import (
    LukaPattern,
    all_paths,
    autocorrelation,
    count_occurrences,
    count_occurrences_array,
    moments,
    occurrence_distribution,
    parse_steps,
    path_array,
    total_occurrences,
    total_occurrences_closed_form,
    validate_path,
)
from growth1324.combinatorics import catalan

ANCHOR = [1, 1, 1, 1, 0, -2, 1, 0, 1, 0, 1, 1, -3, -2, 1, 0, 1, -1]
PATTERNS = [(1,), (1, 1), (1, 0), (1, 0, 1), (1, 1, -1), (1, 1, 0, 1, 1), (1, 0, 0)]


def test_anchor_path():
    assert validate_path(ANCHOR)
    assert count_occurrences(ANCHOR, (1, 0, 1)) == 3


def test_validation():
    assert not validate_path([1, 2])
    assert not validate_path([1, -1])
    assert not validate_path([0])
    with pytest.raises(DomainError):
        LukaPattern((1, -1))
    with pytest.raises(DomainError):
        LukaPattern(())
    with pytest.raises(InputParseError):
        parse_steps("1,x")
    assert LukaPattern.parse("1, 1,-1").steps == (1, 1, -1)


def test_autocorrelation():
    assert autocorrelation((1, 1, 0, 1, 1)) == [(3, 2), (4, 3)]
    assert autocorrelation((1, 0, 1)) == [(2, 1)]
    assert autocorrelation((1, 0)) == []


def test_path_enumeration():
    for n in range(8):
        assert len(list(all_paths(n))) == catalan(n)
        assert path_array(n).shape == (catalan(n), n)
    with pytest.raises(ResourceError):
        path_array(40)


@pytest.mark.parametrize("pat", PATTERNS)
@pytest.mark.parametrize("conv", ["all", "skip-first"])
def test_distribution_matches_brute_force(pat, conv):
    for n in range(1, 10):
        want: dict[int, int] = {}
        for p in all_paths(n):
            c = count_occurrences(p, pat, conv)
            want[c] = want.get(c, 0) + 1
        assert occurrence_distribution(pat, n, conv) == want


@pytest.mark.parametrize("pat", PATTERNS)
def test_total_closed_form(pat):
    for n in range(1, 16):
        assert total_occurrences(pat, n) == total_occurrences_closed_form(pat, n)


def test_array_counter_matches_scalar():
    rows = path_array(9)
    for pat in PATTERNS:
        for conv in ("all", "skip-first"):
            got = count_occurrences_array(rows, pat, conv)
            assert got.tolist() == [count_occurrences(r, pat, conv) for r in rows.tolist()]


def test_moments_small():
    mo = moments({0: 1, 2: 1})
    assert (mo.paths, mo.mean, mo.variance, mo.skewness) == (2, 1, 1, 0.0)


def test_distribution_cap():
    with pytest.raises(ResourceError):
        occurrence_distribution((1,), 41)


@given(st.lists(st.integers(-3, 1), min_size=1, max_size=20))
@settings(max_examples=200, deadline=None)
def test_counts_bounded(steps):
    if not validate_path(steps):
        return
    for pat in PATTERNS:
        all_ = count_occurrences(steps, pat, "all")
        skip = count_occurrences(steps, pat, "skip-first")
        assert 0 <= skip <= all_ <= skip + 1
