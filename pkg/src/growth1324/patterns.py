"""Pattern containment, the incremental 1324 guard, and the interleaving
counter Q(T, F).

The guard: for a 1324-free prefix let ``s`` be the smallest value playing the
'3' in any occurrence of 132.  Appending ``x`` creates a 1324 iff ``x > s``.
After a safe append, new 132 occurrences have ``x`` as their '2', so ``s``
drops to the least earlier value ``v > x`` that has some smaller value before
it.  Both updates are O(prefix) and containment is monotone under appending,
so a depth-first merge search can cut a branch as soon as the guard fires.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, inf
from typing import Literal, Sequence

import numpy as np

from . import _accel
from ._accel import njit, prange
from .combinatorics import (
    PlaneForest,
    PlaneTree,
    check_forest_code,
    check_tree_code,
    embed_blue_nonroot,
    embed_forest,
)

PAT_1324 = (1, 3, 2, 4)
_BIG = 1 << 30


def _pattern_of(seq: Sequence[int]) -> tuple[int, ...]:
    order = sorted(range(len(seq)), key=seq.__getitem__)
    ranks = [0] * len(seq)
    for r, i in enumerate(order):
        ranks[i] = r + 1
    return tuple(ranks)


def contains_pattern(seq: Sequence[int], pat: Sequence[int]) -> bool:
    """True iff some subsequence of ``seq`` is order-isomorphic to ``pat``."""
    if len(pat) == 0:
        raise ValueError("empty pattern")
    pat = _pattern_of(pat)
    k = len(pat)
    if k > len(seq):
        return False
    if pat == PAT_1324:
        return guard_threshold(seq, strict=False) is None
    return any(_pattern_of(sub) == pat for sub in combinations(seq, k))


def contains_1324_naive(seq: Sequence[int]) -> bool:
    """O(n^4) scan over all 4-subsets; kept as the reference check."""
    for a, b, c, d in combinations(seq, 4):
        if a < c < b < d:
            return True
    return False


def guard_threshold(prefix: Sequence[int], strict: bool = True) -> float | None:
    """Smallest '3' over all 132 occurrences in ``prefix`` (``inf`` if none).

    Returns ``None`` if ``prefix`` already contains 1324; with ``strict`` that
    case raises instead.
    """
    s = inf
    low = inf  # minimum of the values seen so far
    seen: list[tuple[int, float]] = []  # (value, min strictly before it)
    for x in prefix:
        if x > s:
            if strict:
                raise ValueError("prefix contains 1324")
            return None
        for v, before in seen:
            if before < x < v and v < s:
                s = v
        seen.append((x, low))
        low = min(low, x)
    return s


# ---------------------------------------------------------------------------
# numba kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def _q_dfs(b, r):
    """Count 1324-free merges of ``b`` and ``r`` by pruned depth-first search."""
    nb = b.shape[0]
    nr = r.shape[0]
    n = nb + nr
    vals = np.zeros(n + 1, np.int64)
    pmin = np.zeros(n + 2, np.int64)  # pmin[p] = min(vals[:p])
    s = np.zeros(n + 2, np.int64)
    ii = np.zeros(n + 2, np.int64)
    jj = np.zeros(n + 2, np.int64)
    choice = np.zeros(n + 2, np.int64)
    big = 1 << 30
    pmin[0] = big
    s[0] = big
    depth = 0
    count = 0
    while depth >= 0:
        if depth == n:
            count += 1
            depth -= 1
            continue
        c = choice[depth]
        i = ii[depth]
        j = jj[depth]
        if c == 0:
            choice[depth] = 1
            if i >= nb:
                continue
            x = b[i]
        elif c == 1:
            choice[depth] = 2
            if j >= nr:
                continue
            x = r[j]
        else:
            depth -= 1
            continue
        if x > s[depth]:
            continue
        t = s[depth]
        for q in range(depth):
            v = vals[q]
            if v > x and v < t and pmin[q] < x:
                t = v
        vals[depth] = x
        s[depth + 1] = t
        pmin[depth + 1] = min(pmin[depth], x)
        if c == 0:
            ii[depth + 1] = i + 1
            jj[depth + 1] = j
        else:
            ii[depth + 1] = i
            jj[depth + 1] = j + 1
        choice[depth + 1] = 0
        depth += 1
    return count


@njit(cache=True, parallel=True)
def _q_block_numba(blue, red, out):
    """``out[t * nF + f] = Q`` for every blue row ``t`` and red row ``f``.

    Red rows must already be shifted above every blue value.
    """
    nt = blue.shape[0]
    nf = red.shape[0]
    for k in prange(nt * nf):
        out[k] = _q_dfs(blue[k // nf], red[k % nf])


@njit(cache=True)
def _avoids_1324_rows_numba(perms, out):
    n = perms.shape[1]
    big = 1 << 30
    pmin = np.empty(n + 1, np.int64)
    for row in range(perms.shape[0]):
        s = big
        pmin[0] = big
        ok = True
        for p in range(n):
            x = perms[row, p]
            if x > s:
                ok = False
                break
            t = s
            for q in range(p):
                v = perms[row, q]
                if v > x and v < t and pmin[q] < x:
                    t = v
            s = t
            pmin[p + 1] = min(pmin[p], x)
        out[row] = ok


# ---------------------------------------------------------------------------
# numpy kernels
# ---------------------------------------------------------------------------

def _avoids_1324_rows_numpy(perms: np.ndarray) -> np.ndarray:
    perms = np.asarray(perms, dtype=np.int64)
    rows, n = perms.shape
    ok = np.ones(rows, dtype=bool)
    if n < 4:
        return ok
    s = np.full(rows, _BIG, dtype=np.int64)
    pmin = np.full((rows, n), _BIG, dtype=np.int64)  # min strictly before column
    for p in range(1, n):
        pmin[:, p] = np.minimum(pmin[:, p - 1], perms[:, p - 1])
    for p in range(n):
        x = perms[:, p]
        ok &= x <= s
        if p:
            prev = perms[:, :p]
            hit = (prev > x[:, None]) & (pmin[:, :p] < x[:, None])
            cand = np.where(hit, prev, _BIG).min(axis=1)
            s = np.minimum(s, cand)
    return ok


def avoids_1324_rows(perms: np.ndarray) -> np.ndarray:
    """Vectorized 1324 test: one boolean per row of a 2-D integer array."""
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if perms.ndim != 2:
        raise ValueError("expected a 2-D array of sequences")
    if _accel.USE_NUMBA:
        out = np.empty(perms.shape[0], dtype=np.bool_)
        _avoids_1324_rows_numba(perms, out)
        return out
    return _avoids_1324_rows_numpy(perms)


def _q_block_numpy(blue: np.ndarray, red: np.ndarray, max_rows: int = 1 << 21) -> np.ndarray:
    """Level-synchronous pruned merge search over a whole block of pairs.

    Every frontier row is one 1324-free merge prefix of one pair; each level
    appends a blue or a red point, drops rows the guard rejects, and updates
    the threshold.  Pairs are processed in slices so the frontier stays
    below ``max_rows``.
    """
    blue = np.asarray(blue, dtype=np.int64)
    red = np.asarray(red, dtype=np.int64)
    nt, nb = blue.shape
    nf, nr = red.shape
    n = nb + nr
    total = nt * nf
    out = np.zeros(total, dtype=np.int64)
    if n == 0:
        out[:] = 1
        return out
    widest = comb(n, nr)
    step = max(1, max_rows // max(widest, 1))
    for lo in range(0, total, step):
        hi = min(total, lo + step)
        pair = np.arange(lo, hi, dtype=np.int64)
        i = np.zeros(hi - lo, dtype=np.int64)
        j = np.zeros(hi - lo, dtype=np.int64)
        s = np.full(hi - lo, _BIG, dtype=np.int64)
        vals = np.zeros((hi - lo, n), dtype=np.int64)
        pmin = np.full((hi - lo, n + 1), _BIG, dtype=np.int64)
        for depth in range(n):
            kids = []
            for use_blue in (True, False):
                sel = np.nonzero(i < nb if use_blue else j < nr)[0]
                if sel.size == 0:
                    continue
                if use_blue:
                    x = blue[pair[sel] // nf, i[sel]]
                else:
                    x = red[pair[sel] % nf, j[sel]]
                keep = x <= s[sel]
                sel, x = sel[keep], x[keep]
                prev = vals[sel, :depth]
                hit = (prev > x[:, None]) & (pmin[sel, :depth] < x[:, None])
                cand = np.where(hit, prev, _BIG).min(axis=1, initial=_BIG)
                nvals = vals[sel].copy()
                nvals[:, depth] = x
                npmin = pmin[sel].copy()
                npmin[:, depth + 1] = np.minimum(npmin[:, depth], x)
                kids.append((
                    pair[sel],
                    i[sel] + use_blue,
                    j[sel] + (not use_blue),
                    np.minimum(s[sel], cand),
                    nvals,
                    npmin,
                ))
            if not kids:
                break
            pair, i, j, s, vals, pmin = (np.concatenate(parts) for parts in zip(*kids))
        out += np.bincount(pair, minlength=total)[:total] if pair.size else 0
    return out


def q_block(blue: np.ndarray, red: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Q for every (blue row, red row) combination, flattened row-major.

    ``blue`` rows are blue non-root embeddings (values ``1..nb``); ``red`` rows
    are forest embeddings with values ``1..nr``, shifted here above the blue
    band.
    """
    blue = np.ascontiguousarray(blue, dtype=np.int64)
    red = np.ascontiguousarray(red, dtype=np.int64) + blue.shape[1] + 1
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    if use_numba:
        if not _accel.HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        out = np.empty(blue.shape[0] * red.shape[0], dtype=np.int64)
        _q_block_numba(blue, red, out)
        return out
    return _q_block_numpy(blue, red)


# ---------------------------------------------------------------------------
# Q(T, F)
# ---------------------------------------------------------------------------

def _codes(tree, forest) -> tuple[str, str]:
    t = tree.code if isinstance(tree, PlaneTree) else check_tree_code(tree)
    f = forest.code if isinstance(forest, PlaneForest) else check_forest_code(forest)
    return t, f


def merge_sequences(blue: Sequence[int], red: Sequence[int], red_slots: Sequence[int]) -> list[int]:
    """Shuffle ``red`` into ``blue`` with red points at positions ``red_slots``."""
    n = len(blue) + len(red)
    slots = set(red_slots)
    bi = iter(blue)
    ri = iter(red)
    return [next(ri) if p in slots else next(bi) for p in range(n)]


def shuffles(tree, forest, with_root: bool = False):
    """Yield every order-preserving shuffle of the pair's point sequences."""
    t, f = _codes(tree, forest)
    b = embed_blue_nonroot(t)
    shift = len(b) + 1
    r = [v + shift for v in embed_forest(f)]
    n = len(b) + len(r)
    for slots in combinations(range(n), len(r)):
        seq = merge_sequences(b, r, slots)
        if with_root:
            # root value |T| sits at the last position, above blue, below red
            seq = seq + [shift]
        yield seq


@lru_cache(maxsize=1 << 16)
def _q_cached(t: str, f: str, mode: str) -> int:
    if mode == "naive":
        return sum(not contains_1324_naive(seq) for seq in shuffles(t, f))
    b = np.array(embed_blue_nonroot(t), dtype=np.int64).reshape(1, -1)
    r = np.array(embed_forest(f), dtype=np.int64).reshape(1, -1)
    return int(q_block(b, r)[0])


def q_count(tree: PlaneTree | str, forest: PlaneForest | str,
            mode: Literal["pruned", "naive"] = "pruned") -> int:
    """Number of 1324-avoiding interleavings of the non-root vertices of the
    blue subtree ``tree`` with the red fringe ``forest``."""
    if mode not in ("pruned", "naive"):
        raise ValueError(f"unknown mode {mode!r}")
    t, f = _codes(tree, forest)
    return _q_cached(t, f, mode)


# ---------------------------------------------------------------------------
# Av(1324) counting
# ---------------------------------------------------------------------------

@njit(cache=True)
def _count_avoiders_numba(n):
    vals = np.zeros(n + 1, np.int64)
    pmin = np.zeros(n + 2, np.int64)
    s = np.zeros(n + 2, np.int64)
    nxt = np.zeros(n + 2, np.int64)  # next candidate value to try at depth
    used = np.zeros(n + 2, np.bool_)
    big = 1 << 30
    pmin[0] = big
    s[0] = big
    nxt[0] = 1
    depth = 0
    count = 0
    while depth >= 0:
        if depth == n:
            count += 1
            depth -= 1
            used[vals[depth]] = False
            continue
        x = nxt[depth]
        if x > n or x > s[depth]:
            # values are tried in increasing order, so the guard cuts the rest
            depth -= 1
            if depth >= 0:
                used[vals[depth]] = False
            continue
        nxt[depth] = x + 1
        if used[x]:
            continue
        t = s[depth]
        for q in range(depth):
            v = vals[q]
            if v > x and v < t and pmin[q] < x:
                t = v
        vals[depth] = x
        used[x] = True
        s[depth + 1] = t
        pmin[depth + 1] = min(pmin[depth], x)
        nxt[depth + 1] = 1
        depth += 1
    return count


def _count_avoiders_python(n: int) -> int:
    def extend(prefix: list[int], pm: list[int], s: float, free: list[int]) -> int:
        if not free:
            return 1
        total = 0
        depth = len(prefix)
        for x in free:
            if x > s:
                break
            t = s
            for q in range(depth):
                v = prefix[q]
                if x < v < t and pm[q] < x:
                    t = v
            prefix.append(x)
            pm.append(min(pm[-1], x))
            total += extend(prefix, pm, t, [y for y in free if y != x])
            prefix.pop()
            pm.pop()
        return total

    return extend([], [_BIG], inf, list(range(1, n + 1)))
