"""The Q(T, F) table over all nontrivial pairs with ``|T| + |F| <= N``.

Nontrivial means ``|T| >= 2`` and ``|F| >= 1``; every other pair has Q = 1
and contributes nothing to the bound, so it is never stored.

File format (byte-deterministic)::

    tree,forest,q
    (()),(),2
    ...

Records are sorted by shell ``|T| + |F|``, then tree code, then forest code.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _accel
from .combinatorics import (
    catalan,
    check_forest_code,
    check_tree_code,
    embed_blue_nonroot,
    embed_forest,
    forest_codes,
    forest_h,
    tree_codes,
)
from .errors import CoverageError, InputParseError
from .patterns import q_block

logger = logging.getLogger(__name__)

HEADER = "tree,forest,q"


def shell_count(s: int) -> int:
    """Number of nontrivial pairs with ``|T| + |F| = s``."""
    if s < 3:
        return 0
    return catalan(s) - 2 * catalan(s - 1)


def pair_count(n: int) -> int:
    return sum(shell_count(s) for s in range(3, n + 1))


@dataclass
class QTable:
    n: int
    tree: np.ndarray  # str codes
    forest: np.ndarray
    q: np.ndarray  # int64
    metadata: dict = field(default_factory=dict)
    _index: dict | None = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTable):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.tree, other.tree)
                and np.array_equal(self.forest, other.forest)
                and np.array_equal(self.q, other.q))

    @property
    def tree_size(self) -> np.ndarray:
        return np.char.str_len(self.tree.astype(str)) // 2

    @property
    def forest_size(self) -> np.ndarray:
        return np.char.str_len(self.forest.astype(str)) // 2

    def get(self, tree: str, forest: str) -> int:
        """Q for one pair; trivial pairs return 1 without a lookup."""
        if len(tree) <= 2 or not forest:
            return 1
        if len(tree) // 2 + len(forest) // 2 > self.n:
            raise CoverageError(f"pair ({tree}, {forest}) lies beyond table bound N={self.n}")
        if self._index is None:
            self._index = {(t, f): i for i, (t, f) in enumerate(zip(self.tree, self.forest))}
        try:
            return int(self.q[self._index[tree, forest]])
        except KeyError:
            raise CoverageError(f"pair ({tree}, {forest}) missing from table") from None

    def restrict(self, n: int) -> "QTable":
        """Sub-table with shells ``<= n``."""
        if n > self.n:
            raise CoverageError(f"table covers N={self.n}, requested N={n}")
        keep = (self.tree_size + self.forest_size) <= n
        return QTable(n, self.tree[keep], self.forest[keep], self.q[keep], dict(self.metadata))

    def check_coverage(self, n: int | None = None) -> None:
        """Raise :class:`CoverageError` naming a missing pair if any shell is short."""
        n = self.n if n is None else n
        if n > self.n:
            raise CoverageError(f"table covers N={self.n}, requested N={n}")
        shells = self.tree_size + self.forest_size
        have = np.bincount(shells, minlength=n + 1) if len(shells) else np.zeros(n + 1, int)
        for s in range(3, n + 1):
            if have[s] == shell_count(s):
                continue
            present = {(t, f) for t, f, sh in zip(self.tree, self.forest, shells) if sh == s}
            for t, f in _shell_pairs(s):
                if (t, f) not in present:
                    raise CoverageError(f"missing pair ({t}, {f}) in shell {s}")
            raise CoverageError(f"shell {s} has {have[s]} records, expected {shell_count(s)}")

    def groups(self, n: int | None = None) -> dict[tuple[int, int, int], np.ndarray]:
        """Q values keyed by ``(|T|, |F|, h)``; the bound weights depend only on these."""
        n = self.n if n is None else n
        ts = self.tree_size
        fs = self.forest_size
        hs = np.fromiter((forest_h(f) for f in self.forest), dtype=np.int64, count=len(self))
        keep = (ts + fs) <= n
        out: dict[tuple[int, int, int], np.ndarray] = {}
        if not keep.any():
            return out
        key = np.stack([ts[keep], fs[keep], hs[keep]], axis=1)
        qs = self.q[keep]
        uniq, inv = np.unique(key, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        order = np.argsort(inv, kind="stable")
        bounds = np.searchsorted(inv[order], np.arange(len(uniq) + 1))
        for g, (i, m, h) in enumerate(uniq):
            out[int(i), int(m), int(h)] = qs[order[bounds[g]:bounds[g + 1]]]
        return out


def _shell_pairs(s: int):
    for i in range(2, s):
        for t in tree_codes(i):
            for f in forest_codes(s - i):
                yield t, f


def _embeddings(codes, embed) -> np.ndarray:
    if not codes:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([embed(c) for c in codes], dtype=np.int64)


def build_q_table(n: int, threads: int | None = None, use_numba: bool | None = None,
                  progress=None) -> QTable:
    """Compute Q for every nontrivial pair with ``|T| + |F| <= n``.

    Each ``(|T|, |F|)`` block is one parallel map over its pairs (results land
    in fixed slots, so the output does not depend on the thread count); shells
    are then merged in canonical code order.
    """
    t0 = time.perf_counter()
    requested = _accel.default_threads() if threads is None else int(threads)
    effective = _accel.set_threads(requested)
    trees, forests, qs = [], [], []
    blue_cache: dict[int, np.ndarray] = {}
    for s in range(3, n + 1):
        st, sf, sq = [], [], []
        for i in range(2, s):
            m = s - i
            if i not in blue_cache:
                blue_cache[i] = _embeddings(tree_codes(i), embed_blue_nonroot)
            red = _embeddings(forest_codes(m), embed_forest)
            q = q_block(blue_cache[i], red, use_numba=use_numba)
            tc = np.array(tree_codes(i))
            fc = np.array(forest_codes(m))
            st.append(np.repeat(tc, len(fc)))
            sf.append(np.tile(fc, len(tc)))
            sq.append(q)
            if progress:
                progress(s, i, m, len(q))
        st_a = np.concatenate(st).astype(object)
        sf_a = np.concatenate(sf).astype(object)
        sq_a = np.concatenate(sq)
        order = sorted(range(len(sq_a)), key=lambda k: (st_a[k], sf_a[k]))
        trees.append(st_a[order])
        forests.append(sf_a[order])
        qs.append(sq_a[order])
        logger.info("shell %d: %d pairs", s, len(sq_a))
    table = QTable(
        n=n,
        tree=np.concatenate(trees) if trees else np.zeros(0, dtype=object),
        forest=np.concatenate(forests) if forests else np.zeros(0, dtype=object),
        q=np.concatenate(qs) if qs else np.zeros(0, dtype=np.int64),
    )
    table.metadata = {
        "built": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "threads": effective,
        "threads_requested": requested,
        "numba": _accel.USE_NUMBA if use_numba is None else bool(use_numba),
        "pairs": len(table),
        "seconds": round(time.perf_counter() - t0, 3),
    }
    return table


def save_q_table(table: QTable, path: str | Path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(HEADER + "\n")
        fh.writelines(f"{t},{f},{int(q)}\n" for t, f, q in zip(table.tree, table.forest, table.q))


def load_q_table(path: str | Path, require_n: int | None = None) -> QTable:
    """Read a table file; its bound ``N`` is the largest shell present.

    Raises :class:`InputParseError` (with the line number) on a malformed
    line and :class:`CoverageError` if the content does not cover
    ``require_n``.
    """
    trees, forests, qs = [], [], []
    try:
        fh = open(path, encoding="ascii")
    except OSError as exc:
        raise InputParseError(f"cannot read Q-table {path}: {exc.strerror}") from exc
    with fh:
        header = fh.readline().rstrip("\n")
        if header != HEADER:
            raise InputParseError(f"{path}:1: expected header {HEADER!r}, got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(",")
            try:
                if len(parts) != 3:
                    raise ValueError(f"expected 3 fields, got {len(parts)}")
                t, f, q = parts
                check_tree_code(t)
                check_forest_code(f)
                qv = int(q)
                if qv < 1:
                    raise ValueError(f"q must be positive, got {qv}")
            except ValueError as exc:
                raise InputParseError(f"{path}:{lineno}: {exc}") from None
            trees.append(t)
            forests.append(f)
            qs.append(qv)
    tree = np.array(trees, dtype=object)
    forest = np.array(forests, dtype=object)
    if qs:
        shells = np.array([len(t) // 2 + len(f) // 2 for t, f in zip(trees, forests)])
        n = int(shells.max())
    else:
        n = 2
    table = QTable(n, tree, forest, np.array(qs, dtype=np.int64), {"source": str(path), "pairs": len(qs)})
    if require_n is not None and require_n > n:
        raise CoverageError(f"{path} covers N={n}, requested N={require_n}")
    table.check_coverage()
    return table
