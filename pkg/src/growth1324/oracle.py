"""Brute-force ground truth.

Av(1324) counts by two independent enumerators, explicit construction and
uniform sampling of subtree-preserving interleavings (W0), structural counts
of red forests and fringes, and exact finite-size means by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from typing import Iterator, Literal, Sequence

import numpy as np

from . import _accel
from .combinatorics import (
    PlaneForest,
    PlaneTree,
    catalan,
    check_forest_code,
    check_tree_code,
    embed_blue_tree,
    embed_red_tree,
    forest_codes,
    tree_codes,
)
from .errors import DomainError, ResourceError
from .patterns import _count_avoiders_numba, _count_avoiders_python, avoids_1324_rows

AVOIDER_CAP = 10
NAIVE_CAP = 8


# ---------------------------------------------------------------------------
# Av(1324)
# ---------------------------------------------------------------------------

def count_avoiders(n: int, cap: int = AVOIDER_CAP) -> int:
    """``|Av_n(1324)|`` by prefix-extension search with the 1324 guard."""
    if n < 0:
        raise DomainError("length must be nonnegative")
    if n > cap:
        raise ResourceError(f"n={n} exceeds the enumeration cap {cap}")
    if n == 0:
        return 1
    if _accel.USE_NUMBA:
        return int(_count_avoiders_numba(n))
    return _count_avoiders_python(n)


def count_avoiders_naive(n: int, cap: int = NAIVE_CAP) -> int:
    """Filter all ``n!`` permutations, testing each 4-subset of positions."""
    if n > cap:
        raise ResourceError(f"n={n} exceeds the naive cap {cap}")
    if n < 4:
        return len(list(permutations(range(n))))
    perms = np.array(list(permutations(range(1, n + 1))), dtype=np.int8)
    bad = np.zeros(len(perms), dtype=bool)
    for a, b, c, d in combinations(range(n), 4):
        pa, pb, pc, pd = perms[:, a], perms[:, b], perms[:, c], perms[:, d]
        bad |= (pa < pc) & (pc < pb) & (pb < pd)
    return int((~bad).sum())


# ---------------------------------------------------------------------------
# W0 construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WParams:
    t: int  # blue trees; there are t + 1 red trees
    k: int  # red tree size
    ell: int  # blue tree size
    d: int  # blue root degree

    def __post_init__(self):
        if self.t < 1 or self.k < 1 or self.ell < 1:
            raise DomainError(f"t, k, ell must be >= 1: {self}")
        if self.ell >= 2 and not 1 <= self.d <= self.ell - 1:
            raise DomainError(f"need 1 <= d <= ell-1: {self}")
        if self.ell == 1 and self.d != 0:
            raise DomainError(f"a one-vertex blue tree has root degree 0: {self}")

    @property
    def length(self) -> int:
        return (self.t + 1) * self.k + self.t * self.ell

    @property
    def count_formula(self) -> int:
        """``R^(t+1) B^t P^(2t)`` for subtree-preserving interleavings."""
        R = catalan(self.k - 1)
        B = _forest_count(self.ell - 1, self.d)
        P = comb(self.k - 1 + self.d, self.d)
        return R ** (self.t + 1) * B ** self.t * P ** (2 * self.t)


@dataclass(frozen=True)
class W0Element:
    perm: tuple[int, ...]
    red: tuple[str, ...]
    blue: tuple[str, ...]
    red_roots: tuple[int, ...]  # positions
    blue_roots: tuple[int, ...]
    tree_edges: tuple[tuple[int, int], ...]  # position pairs, i < j


def _blue_blocks(code: str) -> tuple[list[list[int]], list[list[int]]]:
    """Principal-subtree blocks of a blue tree as lists of local indices.

    Local index = position in the blue embedding.  Returns blocks in position
    order and in ascending value order.
    """
    vals = embed_blue_tree(code)
    ell = len(vals)
    children = PlaneTree.from_code(code).children
    # red preorder index q <-> blue position ell - 1 - q
    owner = {}
    q = 1
    for ci, child in enumerate(children):
        for _ in range(child.size):
            owner[ell - 1 - q] = ci
            q += 1
    blocks: dict[int, list[int]] = {}
    for p in range(ell - 1):
        blocks.setdefault(owner[p], []).append(p)
    by_pos = sorted(blocks.values(), key=lambda b: b[0])
    by_val = sorted((sorted(b, key=vals.__getitem__) for b in blocks.values()),
                    key=lambda b: vals[b[0]])
    return by_pos, by_val


def _red_order(code: str) -> tuple[list[int], list[int]]:
    """Non-root local indices (preorder) in position order and in value order."""
    vals = embed_red_tree(code)
    nonroot = list(range(1, len(vals)))
    return nonroot, sorted(nonroot, key=vals.__getitem__)


def _merge(reds: list, blocks: list[list], slots: Sequence[int]) -> list:
    out = []
    ri = iter(reds)
    bi = iter(blocks)
    chosen = set(slots)
    for s in range(len(reds) + len(blocks)):
        if s in chosen:
            out.extend(next(bi))
        else:
            out.append(next(ri))
    return out


def _local_edges(code: str, blue: bool) -> list[tuple[int, int]]:
    """Parent-child pairs in local indices (red: preorder; blue: position)."""
    edges = []
    stack: list[int] = []
    idx = 0
    n = len(code) // 2
    for ch in code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], idx))
            stack.append(idx)
            idx += 1
        else:
            stack.pop()
    if blue:
        edges = [(n - 1 - a, n - 1 - b) for a, b in edges]
    return edges


def build_W0(red: Sequence[str], blue: Sequence[str],
             h_slots: Sequence[Sequence[int]], v_slots: Sequence[Sequence[int]]) -> W0Element:
    """Assemble one element from its trees and pre-interleavings.

    ``h_slots[i]`` places the blue subtree blocks of ``blue[i]`` among the
    non-root red vertices of ``red[i]`` by position; ``v_slots[i]`` places
    them among the non-root red vertices of ``red[i + 1]`` by value.
    """
    t = len(blue)
    if len(red) != t + 1 or len(h_slots) != t or len(v_slots) != t:
        raise DomainError("need t+1 red trees, t blue trees and t slot choices of each kind")
    R = [("R", i) for i in range(t + 1)]
    B = [("B", i) for i in range(t)]
    red_info = [_red_order(c) for c in red]
    blue_info = [_blue_blocks(c) for c in blue]

    positions: list[tuple] = []
    for i in range(t + 1):
        positions.append((R[i], 0))
        nonroot_pos = red_info[i][0]
        if i < t:
            blocks = [[(B[i], p) for p in blk] for blk in blue_info[i][0]]
            seq = _merge([(R[i], q) for q in nonroot_pos], blocks, h_slots[i])
            positions.extend(seq)
            positions.append((B[i], len(blue[i]) // 2 - 1))
        else:
            positions.extend((R[i], q) for q in nonroot_pos)

    values: list[tuple] = []  # ascending
    for i in range(t, -1, -1):
        values.append((R[i], 0))
        nonroot_val = red_info[i][1]
        if i > 0:
            blocks = [[(B[i - 1], p) for p in blk] for blk in blue_info[i - 1][1]]
            values.extend(_merge([(R[i], q) for q in nonroot_val], blocks, v_slots[i - 1]))
            values.append((B[i - 1], len(blue[i - 1]) // 2 - 1))
        else:
            values.extend((R[i], q) for q in nonroot_val)

    rank = {v: r + 1 for r, v in enumerate(values)}
    where = {v: p for p, v in enumerate(positions)}
    perm = tuple(rank[v] for v in positions)

    edges = []
    for i, c in enumerate(red):
        edges += [(where[R[i], a], where[R[i], b]) for a, b in _local_edges(c, blue=False)]
    for i, c in enumerate(blue):
        edges += [(where[B[i], a], where[B[i], b]) for a, b in _local_edges(c, blue=True)]
    edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
    return W0Element(
        perm=perm,
        red=tuple(red),
        blue=tuple(blue),
        red_roots=tuple(where[R[i], 0] for i in range(t + 1)),
        blue_roots=tuple(where[B[i], len(blue[i]) // 2 - 1] for i in range(t)),
        tree_edges=edges,
    )


def _blue_tree_codes(ell: int, d: int) -> list[str]:
    return [c for c in tree_codes(ell) if PlaneTree.from_code(c).degree == d]


def enumerate_W0(p: WParams, cap: int = 200_000) -> Iterator[W0Element]:
    """Every (trees, interleavings) choice; only for tiny parameters."""
    if p.count_formula > cap:
        raise ResourceError(f"{p} has {p.count_formula} elements, above cap {cap}")
    reds = list(tree_codes(p.k))
    blues = _blue_tree_codes(p.ell, p.d)
    slots = list(combinations(range(p.k - 1 + p.d), p.d))
    for rs in product(reds, repeat=p.t + 1):
        for bs in product(blues, repeat=p.t):
            for hs in product(slots, repeat=p.t):
                for vs in product(slots, repeat=p.t):
                    yield build_W0(rs, bs, hs, vs)


# uniform random trees by the recursive method

def _forest_count(n: int, c: int) -> int:
    """Plane forests with ``n`` vertices and ``c`` components."""
    if n == 0:
        return 1 if c == 0 else 0
    if c < 1 or c > n:
        return 0
    return c * comb(2 * n - c - 1, n - 1) // n


def _pick(rng: np.random.Generator, weights: Sequence[int]) -> int:
    total = sum(weights)
    x = int(rng.integers(0, total))
    for i, w in enumerate(weights):
        if x < w:
            return i
        x -= w
    raise AssertionError("unreachable")


def random_forest(rng: np.random.Generator, n: int, c: int) -> str:
    if n == 0:
        return ""
    first = _pick(rng, [catalan(s - 1) * _forest_count(n - s, c - 1) for s in range(1, n + 1)]) + 1
    return random_tree(rng, first) + random_forest(rng, n - first, c - 1)


def random_tree(rng: np.random.Generator, n: int, degree: int | None = None) -> str:
    if degree is None:
        degree = _pick(rng, [_forest_count(n - 1, j) for j in range(n)])
    return "(" + random_forest(rng, n - 1, degree) + ")"


def _sample_one(p: WParams, seed: int, index: int) -> W0Element:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    reds = [random_tree(rng, p.k) for _ in range(p.t + 1)]
    blues = [random_tree(rng, p.ell, p.d) for _ in range(p.t)]
    n_slots = p.k - 1 + p.d

    def slots():
        return tuple(sorted(int(s) for s in rng.choice(n_slots, size=p.d, replace=False)))

    hs = [slots() for _ in range(p.t)]
    vs = [slots() for _ in range(p.t)]
    return build_W0(reds, blues, hs, vs)


def sample_W0(p: WParams, count: int, seed: int, max_length: int = 30) -> list[W0Element]:
    """Uniform random elements; sample ``i`` depends only on ``(p, seed, i)``."""
    if p.length > max_length:
        raise ResourceError(f"length {p.length} exceeds {max_length}")
    return [_sample_one(p, seed, i) for i in range(count)]


def all_avoid_1324(elements: Sequence[W0Element]) -> bool:
    if not elements:
        return True
    return bool(avoids_1324_rows(np.array([e.perm for e in elements])).all())


# ---------------------------------------------------------------------------
# red forests and fringes
# ---------------------------------------------------------------------------

def _structure(code: str) -> tuple[list[int], list[list[int]]]:
    parent: list[int] = []
    children: list[list[int]] = []
    stack: list[int] = []
    for ch in code:
        if ch == "(":
            v = len(parent)
            parent.append(stack[-1] if stack else -1)
            children.append([])
            if stack:
                children[stack[-1]].append(v)
            stack.append(v)
        else:
            stack.pop()
    return parent, children


def _subtree_code(children: list[list[int]], v: int, keep=None) -> str:
    kids = children[v] if keep is None else [c for c in children[v] if c in keep]
    return "(" + "".join(_subtree_code(children, c, keep) for c in kids) + ")"


def fringe_occurrences(tree: PlaneTree | str, forest: PlaneForest | str) -> int:
    """Vertices with at least ``h + 1`` children whose leftmost ``h`` child
    subtrees form ``forest`` (``h`` = its component count)."""
    t = tree.code if isinstance(tree, PlaneTree) else check_tree_code(tree)
    f = forest.code if isinstance(forest, PlaneForest) else check_forest_code(forest)
    h = PlaneForest.from_code(f).h
    _, children = _structure(t)
    hits = 0
    for kids in children:
        if len(kids) >= h + 1 and "".join(_subtree_code(children, c) for c in kids[:h]) == f:
            hits += 1
    return hits


def red_forest(tree: PlaneTree | str, v: int) -> list[int]:
    """Preorder indices of the red forest of non-root vertex ``v``: the
    subtrees of its earlier siblings."""
    t = tree.code if isinstance(tree, PlaneTree) else tree
    parent, _ = _structure(t)
    if v <= 0:
        raise DomainError("the root has no red forest")
    return list(range(parent[v] + 1, v))


def fringe_plus_occurrences(tree: PlaneTree | str, forest: PlaneForest | str) -> int:
    """Non-root vertices whose red forest has at least ``|F|`` vertices and
    whose rightmost ``|F|`` forest vertices induce ``forest``."""
    t = tree.code if isinstance(tree, PlaneTree) else check_tree_code(tree)
    f = forest.code if isinstance(forest, PlaneForest) else check_forest_code(forest)
    m = len(f) // 2
    parent, children = _structure(t)
    hits = 0
    for v in range(1, len(parent)):
        lo = parent[v] + 1
        if v - lo < m or m == 0:
            continue
        keep = set(range(v - m, v))
        roots = [u for u in range(v - m, v) if parent[u] not in keep]
        if "".join(_subtree_code(children, u, keep) for u in roots) == f:
            hits += 1
    return hits


def fringe_profile(tree: PlaneTree | str, max_m: int) -> tuple[dict[str, int], dict[str, int]]:
    """Both fringe counts for every forest of at most ``max_m`` vertices in one
    pass: ``(fringe_occurrences, fringe_plus_occurrences)`` keyed by code."""
    t = tree.code if isinstance(tree, PlaneTree) else check_tree_code(tree)
    parent, children = _structure(t)
    sub = [""] * len(parent)
    for v in range(len(parent) - 1, -1, -1):
        sub[v] = "(" + "".join(sub[c] for c in children[v]) + ")"
    rho: dict[str, int] = {}
    plus: dict[str, int] = {}
    for kids in children:
        code = ""
        for h in range(len(kids)):
            if len(code) // 2 <= max_m:
                rho[code] = rho.get(code, 0) + 1
            code += sub[kids[h]]
    for v in range(1, len(parent)):
        lo = parent[v] + 1
        for m in range(1, min(max_m, v - lo) + 1):
            keep = range(v - m, v)
            roots = [u for u in keep if parent[u] < v - m]
            code = "".join(_subtree_code(children, u, keep) for u in roots)
            plus[code] = plus.get(code, 0) + 1
    return rho, plus


def exact_forest_path_count(steps: Sequence[int], pattern: Sequence[int], h: int) -> int:
    """Path-side twin of :func:`fringe_occurrences`: a pattern occurrence not
    at the first step and followed by a step of at most ``-h``."""
    steps = tuple(steps)
    w = tuple(pattern)
    m = len(w)
    return sum(
        steps[k:k + m] == w and steps[k + m] <= -h
        for k in range(1, len(steps) - m)
    )


# ---------------------------------------------------------------------------
# exact finite-size means
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalMoments:
    objects: int
    total: int  # sum of occurrence counts
    ordered_pairs: int  # sum of c (c - 1)
    mean: Fraction
    variance: Fraction
    prop_mean: Fraction


def _summarize(counts: list[int], normalizer: int) -> EmpiricalMoments:
    n = len(counts)
    if n == 0:
        raise DomainError("no objects to average over")
    total = sum(counts)
    mean = Fraction(total, n)
    var = Fraction(sum(c * c for c in counts), n) - mean * mean
    return EmpiricalMoments(n, total, sum(c * (c - 1) for c in counts), mean, var, mean / normalizer)


def empirical_means(kind: Literal["beta", "gamma", "rho", "rho_plus"], *, k: int | None = None,
                    ell: int | None = None, d: int | None = None, j: int | None = None,
                    tree: str | None = None, forest: str | None = None,
                    cap: int = 10) -> EmpiricalMoments:
    """Exact expectation over the uniform distribution by full enumeration.

    ``beta``: blue trees of size ``ell`` and root degree ``d``, share of
    principal subtrees equal to ``tree``.  ``gamma``: arrangements of ``k - 1``
    red vertices and ``d`` blue roots, share of roots with gap ``j`` (the
    leftmost root's gap counts from the start).  ``rho``: trees of size ``k``,
    share of positions whose red forest is ``forest``.  ``rho_plus``: paths
    of length ``k``, share of positions whose red fringe is ``forest``.
    """
    if kind == "beta":
        if ell > cap or d > 5:
            raise ResourceError(f"beta enumeration capped at ell <= {cap}, d <= 5")
        target = check_tree_code(tree)
        counts = []
        for c in tree_codes(ell):
            kids = PlaneTree.from_code(c).children
            if len(kids) == d:
                counts.append(sum(ch.code == target for ch in kids))
        return _summarize(counts, d)
    if kind == "gamma":
        if k > cap or d > 5:
            raise ResourceError(f"gamma enumeration capped at k <= {cap}, d <= 5")
        counts = []
        for roots in combinations(range(k - 1 + d), d):
            prev = -1
            hits = 0
            for r in roots:
                hits += (r - prev - 1) == j
                prev = r
            counts.append(hits)
        return _summarize(counts, d)
    if kind == "rho":
        if k > cap:
            raise ResourceError(f"rho enumeration capped at k <= {cap}")
        counts = [fringe_occurrences(c, forest) for c in tree_codes(k)]
        return _summarize(counts, k)
    if kind == "rho_plus":
        if k > cap:
            raise ResourceError(f"rho_plus enumeration capped at k <= {cap}")
        # paths of length k <-> forests of size k <-> trees of size k + 1
        counts = [fringe_plus_occurrences(c, forest) for c in tree_codes(k + 1)]
        return _summarize(counts, k)
    raise DomainError(f"unknown kind {kind!r}")
