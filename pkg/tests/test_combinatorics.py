import pytest
from hypothesis import given, settings, strategies as st

from growth1324.combinatorics import (
    CodeError,
    PlaneForest,
    PlaneTree,
    catalan,
    check_forest_code,
    check_tree_code,
    embed_blue_nonroot,
    embed_blue_tree,
    embed_forest,
    embed_red_tree,
    forest_codes,
    forest_h,
    forest_to_luka_path,
    hasse_graph,
    luka_path_to_forest,
    luka_path_to_tree,
    tree_codes,
    tree_edges,
    tree_from_hasse,
    tree_to_luka_path,
)
from growth1324.errors import DomainError, InputParseError


def test_catalan():
    assert [catalan(n) for n in range(10)] == [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]


@pytest.mark.parametrize("n", range(1, 10))
def test_enumeration_counts_and_order(n):
    trees = tree_codes(n)
    forests = forest_codes(n)
    assert len(trees) == catalan(n - 1)
    assert len(forests) == catalan(n)
    assert list(trees) == sorted(trees) and len(set(trees)) == len(trees)
    assert all(PlaneTree.from_code(t).code == t for t in trees)


def test_tree_codes_rejects_empty():
    with pytest.raises(DomainError):
        tree_codes(0)


@pytest.mark.parametrize("bad", ["", "(", ")(", "(()", "()()", "(a)"])
def test_bad_tree_codes(bad):
    with pytest.raises(InputParseError):
        check_tree_code(bad)


def test_bad_forest_code_is_parse_error():
    with pytest.raises(CodeError):
        check_forest_code("())(")
    assert check_forest_code("") == ""


def test_forest_structure():
    f = PlaneForest.from_code("()(())")
    assert (f.size, f.h) == (3, 2)
    assert forest_h("") == 0


def test_embeddings():
    assert embed_red_tree("(()())") == [1, 3, 2]
    assert embed_forest("()(())") == [3, 1, 2]
    assert embed_blue_tree("((()()))") == [2, 1, 3, 4]
    assert embed_blue_nonroot("((()()))") == [2, 1, 3]


def test_hasse_diamond():
    assert hasse_graph([1, 3, 2, 4]) == {(0, 1), (0, 2), (1, 3), (2, 3)}


@pytest.mark.parametrize("n", range(1, 8))
def test_red_embedding_hasse_is_the_tree(n):
    for t in tree_codes(n):
        perm = embed_red_tree(t)
        assert hasse_graph(perm) == tree_edges(t)
        assert tree_from_hasse(perm).code == t


def test_tree_from_hasse_rejects_non_tree():
    with pytest.raises(ValueError):
        tree_from_hasse([1, 3, 2, 4])


def test_luka_paths():
    assert tree_to_luka_path("(((())))") == [1, 0, 0, 0]
    assert tree_to_luka_path("(()())") == [1, 1, -1]
    assert forest_to_luka_path("()") == [1]


@st.composite
def tree_code(draw, max_size=12):
    n = draw(st.integers(1, max_size))
    codes = tree_codes(n)
    return codes[draw(st.integers(0, len(codes) - 1))]


@given(tree_code())
@settings(max_examples=200, deadline=None)
def test_path_round_trip(code):
    assert luka_path_to_tree(tree_to_luka_path(code)).code == code
    forest = code[1:-1]
    assert luka_path_to_forest(forest_to_luka_path(forest)).code == forest


@given(tree_code(10))
@settings(max_examples=100, deadline=None)
def test_blue_is_reverse_complement_of_red(code):
    red = embed_red_tree(code)
    n = len(red)
    assert embed_blue_tree(code) == [n + 1 - v for v in reversed(red)]
