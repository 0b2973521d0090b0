"""Lukasiewicz paths and contiguous step patterns.

A path is a step sequence ``s_1..s_n`` with every ``s_i <= 1`` and all partial
heights at least 1.  A pattern is a step block whose own partial heights are
all positive; occurrences are contiguous and may overlap.  Under the
``skip-first`` convention an occurrence starting at step 1 is not counted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, InputParseError, ResourceError

Convention = Literal["all", "skip-first"]
DIST_CAP = 40


def validate_path(steps: Sequence[int]) -> bool:
    height = 0
    for s in steps:
        if s > 1:
            return False
        height += s
        if height < 1:
            return False
    return True


def heights(steps: Sequence[int]) -> list[int]:
    out = []
    h = 0
    for s in steps:
        h += s
        out.append(h)
    return out


@dataclass(frozen=True)
class LukaPattern:
    steps: tuple[int, ...]

    def __post_init__(self):
        if not self.steps:
            raise DomainError("pattern must have at least one step")
        if not validate_path(self.steps):
            raise DomainError(f"pattern {list(self.steps)} has a step > 1 or a nonpositive partial height")

    @property
    def m(self) -> int:
        return len(self.steps)

    @property
    def h(self) -> int:
        return sum(self.steps)

    @classmethod
    def parse(cls, text: str) -> "LukaPattern":
        return cls(parse_steps(text))


def parse_steps(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError:
        raise InputParseError(f"cannot parse step list {text!r}") from None


def _pattern(pat) -> LukaPattern:
    return pat if isinstance(pat, LukaPattern) else LukaPattern(tuple(pat))


def count_occurrences(path: Sequence[int], pat, convention: Convention = "all") -> int:
    w = _pattern(pat).steps
    m = len(w)
    start = 1 if convention == "skip-first" else 0
    path = tuple(path)
    return sum(path[k:k + m] == w for k in range(start, len(path) - m + 1))


def autocorrelation(pat) -> list[tuple[int, int]]:
    """``(shift, height)`` terms of the bivariate autocorrelation polynomial."""
    w = _pattern(pat).steps
    m = len(w)
    hs = heights(w)
    return [(i, hs[i - 1]) for i in range(1, m) if w[i:] == w[:m - i]]


def _automaton(w: tuple[int, ...]) -> tuple[dict[tuple[int, int], int], list[int]]:
    """KMP transitions ``(state, step) -> state`` for steps in the pattern
    alphabet; any other step resets to state 0.  State ``m`` is never stored:
    a completed match falls back to its failure state."""
    m = len(w)
    fail = [0] * (m + 1)
    k = 0
    for i in range(1, m):
        while k and w[i] != w[k]:
            k = fail[k]
        if w[i] == w[k]:
            k += 1
        fail[i + 1] = k
    alphabet = sorted(set(w))
    delta = {}
    for state in range(m):
        for a in alphabet:
            k = state
            while k and w[k] != a:
                k = fail[k]
            if w[k] == a:
                k += 1
            delta[state, a] = k
    return delta, fail


def occurrence_distribution(pat, n: int, convention: Convention = "skip-first",
                            cap: int = DIST_CAP) -> dict[int, int]:
    """Exact number of length-``n`` paths with each occurrence count.

    Dynamic programming over (height, automaton state) carrying the count
    polynomial as an integer vector.
    """
    w = _pattern(pat).steps
    m = len(w)
    if n > cap:
        raise ResourceError(f"n={n} exceeds the distribution cap {cap}")
    if n < 0:
        raise DomainError("path length must be nonnegative")
    if n == 0:
        return {0: 1}
    delta, fail = _automaton(w)
    alphabet = sorted(set(w))
    H = n + 2
    C = n + 2
    # dist[height, state, count]; big integers via object dtype
    dist = np.zeros((H, m, C), dtype=object)
    dist[0, 0, 0] = 1
    for t in range(1, n + 1):
        new = np.zeros_like(dist)
        counted = not (convention == "skip-first" and t == m)
        for s in range(1, -t, -1):
            # source heights y with y + s >= 1
            y_lo = max(0, 1 - s)
            y_hi = min(H, H - s) if s > 0 else H
            if y_lo >= y_hi:
                continue
            src = dist[y_lo:y_hi]
            dst = slice(y_lo + s, y_hi + s)
            if s in alphabet:
                for state in range(m):
                    k = delta[state, s]
                    if k == m:
                        if counted:
                            new[dst, fail[m], 1:] += src[:, state, :-1]
                        else:
                            new[dst, fail[m], :] += src[:, state, :]
                    else:
                        new[dst, k, :] += src[:, state, :]
            else:
                new[dst, 0, :] += src.sum(axis=1)
        dist = new
    totals = dist.sum(axis=(0, 1))
    return {c: int(v) for c, v in enumerate(totals) if v}


def total_occurrences(pat, n: int, convention: Convention = "skip-first") -> int:
    return sum(c * v for c, v in occurrence_distribution(pat, n, convention).items())


def total_occurrences_closed_form(pat, n: int) -> int:
    """``C(2n - 2m + h, n - m - 1)``: total skip-first occurrences over all
    paths of length ``n``."""
    p = _pattern(pat)
    k = n - p.m - 1
    top = 2 * n - 2 * p.m + p.h
    if k < 0 or top < 0:
        return 0
    return comb(top, k)


@dataclass(frozen=True)
class Moments:
    paths: int
    mean: Fraction
    variance: Fraction
    skewness: float


def moments(dist: dict[int, int]) -> Moments:
    total = sum(dist.values())
    mean = Fraction(sum(c * v for c, v in dist.items()), total)
    var = Fraction(sum((c - mean) ** 2 * v for c, v in dist.items()), total)
    third = Fraction(sum((c - mean) ** 3 * v for c, v in dist.items()), total)
    skew = float(third) / float(var) ** 1.5 if var else 0.0
    return Moments(total, mean, var, skew)


def all_paths(n: int):
    """Every path of length ``n`` (exponential; for small-``n`` oracles)."""
    def rec(prefix: list[int], h: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for s in range(1, -h, -1):
            prefix.append(s)
            yield from rec(prefix, h + s)
            prefix.pop()

    yield from rec([], 0)


def path_array(n: int, cap: int = 14) -> np.ndarray:
    """All ``Cat(n)`` paths of length ``n`` as rows of an int8 array."""
    if n > cap:
        raise ResourceError(f"n={n} exceeds the path enumeration cap {cap}")
    paths = np.zeros((1, 0), dtype=np.int8)
    height = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        # a path at height y has y + 1 continuations: steps 1, 0, ..., 1 - y
        reps = height + 1
        idx = np.repeat(np.arange(len(paths)), reps)
        offs = np.arange(reps.sum()) - np.repeat(np.cumsum(reps) - reps, reps)
        steps = (1 - offs).astype(np.int8)
        paths = np.concatenate([paths[idx], steps[:, None]], axis=1)
        height = height[idx] + steps
    return paths


def count_occurrences_array(paths: np.ndarray, pat, convention: Convention = "all") -> np.ndarray:
    """Vectorized :func:`count_occurrences` over the rows of ``paths``."""
    w = np.asarray(_pattern(pat).steps, dtype=paths.dtype)
    m = len(w)
    n = paths.shape[1]
    start = 1 if convention == "skip-first" else 0
    if n - m + 1 <= start:
        return np.zeros(len(paths), dtype=np.int64)
    hit = np.ones((len(paths), n - m + 1 - start), dtype=bool)
    for j in range(m):
        hit &= paths[:, start + j:n - m + 1 + j] == w[j]
    return hit.sum(axis=1)
