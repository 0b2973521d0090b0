"""Plane trees and forests, their permutation embeddings, Hasse graphs and
the tree <-> Lukasiewicz path bijection.

Trees are identified by balanced-parenthesis codes::

    code   := "(" code* ")"
    forest := code*

Children appear in plane (left to right) order.  Lexicographic order on codes
(with ``"(" < ")"``) is the canonical total order used by every enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Sequence

from .errors import DomainError, InputParseError


class CodeError(InputParseError):
    """Malformed tree or forest code."""


def catalan(n: int) -> int:
    if n < 0:
        return 0
    return comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

def _split_forest(code: str) -> list[str]:
    """Split a forest code into component codes, validating as we go."""
    parts = []
    depth = 0
    start = 0
    for pos, ch in enumerate(code):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise CodeError(f"unbalanced ')' at position {pos}")
            if depth == 0:
                parts.append(code[start:pos + 1])
                start = pos + 1
        else:
            raise CodeError(f"unexpected character {ch!r} at position {pos}")
    if depth != 0:
        raise CodeError(f"unbalanced: {depth} unclosed '(' at end of code (position {len(code)})")
    return parts


def check_tree_code(code: str) -> str:
    if not code:
        raise CodeError("empty tree code at position 0")
    parts = _split_forest(code)
    if len(parts) != 1:
        raise CodeError(f"tree code has {len(parts)} outermost groups; second starts at position {len(parts[0])}")
    return code


def check_forest_code(code: str) -> str:
    _split_forest(code)
    return code


@dataclass(frozen=True)
class PlaneTree:
    children: tuple["PlaneTree", ...] = ()

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def code(self) -> str:
        return "(" + "".join(c.code for c in self.children) + ")"

    @property
    def degree(self) -> int:
        return len(self.children)

    @classmethod
    def from_code(cls, code: str) -> "PlaneTree":
        check_tree_code(code)
        return _parse_tree(code)

    def __str__(self) -> str:
        return self.code


@dataclass(frozen=True)
class PlaneForest:
    components: tuple[PlaneTree, ...] = ()

    @cached_property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    @property
    def h(self) -> int:
        return len(self.components)

    @cached_property
    def code(self) -> str:
        return "".join(c.code for c in self.components)

    @classmethod
    def from_code(cls, code: str) -> "PlaneForest":
        return cls(tuple(_parse_tree(p) for p in _split_forest(code)))

    def __str__(self) -> str:
        return self.code


@lru_cache(maxsize=None)
def _parse_tree(code: str) -> PlaneTree:
    return PlaneTree(tuple(_parse_tree(p) for p in _split_forest(code[1:-1])))


def forest_h(code: str) -> int:
    """Number of components of a forest code."""
    depth = 0
    h = 0
    for ch in code:
        if ch == "(":
            if depth == 0:
                h += 1
            depth += 1
        else:
            depth -= 1
    return h


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def forest_codes(m: int) -> tuple[str, ...]:
    """All forest codes with ``m`` vertices, sorted; ``Catalan(m)`` of them."""
    if m < 0:
        raise DomainError("forest size must be nonnegative")
    if m == 0:
        return ("",)
    out = []
    for s in range(1, m + 1):
        rest = forest_codes(m - s)
        for t in tree_codes(s):
            out.extend(t + f for f in rest)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def tree_codes(n: int) -> tuple[str, ...]:
    """All tree codes with ``n`` vertices, sorted; ``Catalan(n-1)`` of them."""
    if n < 1:
        raise DomainError(f"tree size must be >= 1, got {n}")
    return tuple("(" + f + ")" for f in forest_codes(n - 1))


def enumerate_trees(n: int) -> list[PlaneTree]:
    return [_parse_tree(c) for c in tree_codes(n)]


def enumerate_forests(m: int) -> list[PlaneForest]:
    return [PlaneForest.from_code(c) for c in forest_codes(m)]


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def _as_code(t) -> str:
    return t.code if isinstance(t, (PlaneTree, PlaneForest)) else t


def _forest_values(code: str, lo: int) -> list[int]:
    # components left to right; earlier components get higher value bands
    parts = _split_forest(code)
    sizes = [len(p) // 2 for p in parts]
    out: list[int] = []
    base = lo + sum(sizes)
    for p, s in zip(parts, sizes):
        base -= s
        out.extend(_tree_values(p, base))
    return out


def _tree_values(code: str, lo: int) -> list[int]:
    return [lo] + _forest_values(code[1:-1], lo + 1)


def embed_red_tree(tree: PlaneTree | str) -> list[int]:
    """Point sequence of a red tree: root first and lowest, sibling blocks
    consecutive, earlier siblings in higher value bands."""
    code = check_tree_code(_as_code(tree))
    return _tree_values(code, 1)


def embed_forest(forest: PlaneForest | str) -> list[int]:
    code = check_forest_code(_as_code(forest))
    return _forest_values(code, 1)


def embed_blue_tree(tree: PlaneTree | str) -> list[int]:
    """Reverse-complement of the red embedding: root last and highest."""
    red = embed_red_tree(tree)
    n = len(red)
    return [n + 1 - v for v in reversed(red)]


def embed_blue_nonroot(tree: PlaneTree | str) -> list[int]:
    return embed_blue_tree(tree)[:-1]


# ---------------------------------------------------------------------------
# Hasse graphs
# ---------------------------------------------------------------------------

def hasse_graph(perm: Sequence[int]) -> set[tuple[int, int]]:
    """Edges ``(i, j)`` (0-based, ``i < j``) of the Hasse graph of ``perm``."""
    n = len(perm)
    edges = set()
    for i in range(n):
        # scanning right, keep the lowest value seen above perm[i]; a new
        # point is a cover iff it lies below every earlier point above perm[i]
        ceiling = None
        for j in range(i + 1, n):
            v = perm[j]
            if v > perm[i] and (ceiling is None or v < ceiling):
                edges.add((i, j))
                ceiling = v
    return edges


def tree_from_hasse(perm: Sequence[int], root: int = 0) -> PlaneTree:
    """Recover a plane tree from the up-set of ``root`` in a Hasse graph.

    Children of a vertex are its upper covers, ordered by position.  Raises
    ``ValueError`` if the up-set is not a tree.
    """
    edges = hasse_graph(perm)
    up: dict[int, list[int]] = {}
    for i, j in edges:
        up.setdefault(i, []).append(j)
    seen: set[int] = set()

    def build(v: int) -> PlaneTree:
        if v in seen:
            raise ValueError(f"vertex {v} reached twice; up-set is not a tree")
        seen.add(v)
        return PlaneTree(tuple(build(c) for c in sorted(up.get(v, ()))))

    return build(root)


def tree_edges(tree: PlaneTree | str) -> set[tuple[int, int]]:
    """Parent-child edges of ``tree`` indexed by preorder position."""
    t = tree if isinstance(tree, PlaneTree) else PlaneTree.from_code(tree)
    edges = set()
    counter = [0]

    def walk(node: PlaneTree) -> int:
        me = counter[0]
        counter[0] += 1
        for c in node.children:
            edges.add((me, walk(c)))
        return me

    walk(t)
    return edges


# ---------------------------------------------------------------------------
# Lukasiewicz bijection
# ---------------------------------------------------------------------------

def _child_counts_preorder(code: str) -> list[int]:
    counts = []
    stack: list[int] = []
    for ch in code:
        if ch == "(":
            if stack:
                counts[stack[-1]] += 1
            stack.append(len(counts))
            counts.append(0)
        else:
            stack.pop()
    return counts


def tree_to_luka_path(tree: PlaneTree | str) -> list[int]:
    """Visit vertices right to left; a vertex with ``r`` children contributes
    the step ``1 - r``."""
    code = check_tree_code(_as_code(tree))
    return [1 - r for r in reversed(_child_counts_preorder(code))]


def forest_to_luka_path(forest: PlaneForest | str) -> list[int]:
    """The same traversal applied to a forest; final height = component count."""
    code = check_forest_code(_as_code(forest))
    return [1 - r for r in reversed(_child_counts_preorder(code))]


def luka_path_to_forest(steps: Iterable[int]) -> PlaneForest:
    """Inverse of :func:`forest_to_luka_path` (any valid path)."""
    stack: list[PlaneTree] = []
    for s in steps:
        r = 1 - s
        if r > len(stack):
            raise ValueError("not a Lukasiewicz path: height drops to zero")
        # stack top is the leftmost visited component
        kids = [stack.pop() for _ in range(r)]
        stack.append(PlaneTree(tuple(kids)))
    return PlaneForest(tuple(reversed(stack)))


def luka_path_to_tree(steps: Iterable[int]) -> PlaneTree:
    forest = luka_path_to_forest(steps)
    if forest.h != 1:
        raise ValueError(f"path ends at height {forest.h}, not 1")
    return forest.components[0]
