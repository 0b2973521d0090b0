"""Limiting densities, the baseline growth rate and the bound ``g_N``.

``lam`` is the blue/red tree size ratio and ``delta`` the blue root degree as a
fraction of blue tree size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.optimize import minimize

from .combinatorics import PlaneForest, PlaneTree, forest_h
from .errors import CoverageError, DomainError
from .qtable import QTable


def _xlogx(x: float) -> float:
    return 0.0 if x == 0 else x * math.log(x)


def log_E(lam: float, delta: float) -> float:
    """Natural log of the W0 exponential growth factor ``E(lam, delta)``.

    ``0 log 0`` is taken as 0, so ``delta`` in {0, 1} gives the continuous limit.
    """
    if lam <= 0 or not 0 <= delta <= 1:
        raise DomainError(f"need lam > 0 and 0 <= delta <= 1, got ({lam}, {delta})")
    dl = delta * lam
    return (math.log(4.0)
            + lam * _xlogx(2 - delta)
            - lam * _xlogx(1 - delta)
            + 2 * _xlogx(1 + dl)
            - 2 * _xlogx(dl))


def E_eval(lam: float, delta: float) -> float:
    return math.exp(log_E(lam, delta))


def g0(lam: float, delta: float) -> float:
    """Growth rate of the subtree-preserving construction: ``E^(1/(1+lam))``."""
    return math.exp(log_E(lam, delta) / (1 + lam))


def delta_star(lam: float) -> float:
    """The ``delta`` maximizing ``E(lam, .)`` for fixed ``lam``."""
    if lam <= 0:
        raise DomainError(f"lam must be positive, got {lam}")
    return (2 * lam - 1 + math.sqrt(1 + 4 * lam + 8 * lam * lam)) / (2 * lam * (2 + lam))


# ---------------------------------------------------------------------------
# limiting means
# ---------------------------------------------------------------------------

def mu_beta(i: int, delta: float) -> float:
    """Share of blue subtrees isomorphic to a given ``i``-vertex tree."""
    if i < 1:
        raise DomainError(f"tree size must be >= 1, got {i}")
    return (1 - delta) ** (i - 1) / (2 - delta) ** (2 * i - 1)


def mu_gamma(j: int, lam: float, delta: float) -> float:
    """Share of blue roots with gap size exactly ``j``."""
    if j < 0:
        raise DomainError(f"gap size must be >= 0, got {j}")
    dl = delta * lam
    return dl / (1 + dl) ** (j + 1)


def mu_gamma_gt(j: int, lam: float, delta: float) -> float:
    """Share of blue roots with gap size exceeding ``j``."""
    if j < 0:
        raise DomainError(f"gap size must be >= 0, got {j}")
    return 1 / (1 + delta * lam) ** (j + 1)


def mu_rho(m: int) -> float:
    """Share of red-tree positions whose red forest is a given ``m``-vertex forest."""
    if m < 0:
        raise DomainError(f"forest size must be >= 0, got {m}")
    return 0.5 ** (2 * m + 1)


def mu_rho_plus(m: int, h: int) -> float:
    """Share of positions whose rightmost ``m`` forest vertices form a given
    forest with ``h`` components."""
    if not 1 <= h <= m:
        raise DomainError(f"need 1 <= h <= m, got m={m}, h={h}")
    return 0.5 ** (2 * m - h)


Kind = Literal["beta", "gamma", "gamma_gt", "rho", "rho_plus"]


def closed_form_means(kind: Kind, lam: float = 1.0, delta: float = 0.5, *,
                      i: int | None = None, j: int | None = None,
                      m: int | None = None, h: int | None = None) -> float:
    if kind == "beta":
        return mu_beta(i, delta)
    if kind == "gamma":
        return mu_gamma(j, lam, delta)
    if kind == "gamma_gt":
        return mu_gamma_gt(j, lam, delta)
    if kind == "rho":
        return mu_rho(m)
    if kind == "rho_plus":
        return mu_rho_plus(m, h)
    raise DomainError(f"unknown kind {kind!r}")


def mu_sizes(i: int, m: int, h: int, lam: float, delta: float) -> float:
    """Limiting density of (T, F)-subtrees for ``|T| = i``, ``|F| = m`` with
    ``h`` components."""
    return mu_beta(i, delta) * (mu_gamma(m, lam, delta) * mu_rho_plus(m, h)
                                + mu_gamma_gt(m, lam, delta) * mu_rho(m))


def mu_pair(tree: PlaneTree | str, forest: PlaneForest | str, lam: float, delta: float) -> float:
    t = tree.code if isinstance(tree, PlaneTree) else tree
    f = forest.code if isinstance(forest, PlaneForest) else forest
    return mu_sizes(len(t) // 2, len(f) // 2, forest_h(f), lam, delta)


# ---------------------------------------------------------------------------
# g_N
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogQSums:
    """``sum log Q`` per ``(|T|, |F|, h)`` group, accumulated with ``math.fsum``."""

    n: int
    sums: dict[tuple[int, int, int], float]
    pairs: int

    @classmethod
    def from_table(cls, table: QTable | None, n: int) -> "LogQSums":
        if n < 3:
            return cls(n, {}, 0)
        if table is None:
            raise CoverageError(f"N={n} needs a Q-table")
        if table.n < n:
            raise CoverageError(f"table covers N={table.n}, requested N={n}")
        sums = {}
        pairs = 0
        for key, qs in sorted(table.groups(n).items()):
            # Q = 1 pairs contribute log 1 = 0
            sums[key] = math.fsum(np.log(qs[qs > 1]).tolist())
            pairs += len(qs)
        return cls(n, sums, pairs)


def log_gN(lam: float, delta: float, sums: LogQSums) -> float:
    terms = [mu_sizes(i, m, h, lam, delta) * s for (i, m, h), s in sums.sums.items()]
    return (log_E(lam, delta) + 2 * delta * lam * math.fsum(terms)) / (1 + lam)


def gN_eval(lam: float, delta: float, n: int, table: QTable | LogQSums | None = None) -> float:
    """``g_N(lam, delta)``; ``N < 3`` reduces to :func:`g0`."""
    sums = table if isinstance(table, LogQSums) else LogQSums.from_table(table, n)
    if sums.n != n:
        raise CoverageError(f"precomputed sums are for N={sums.n}, requested N={n}")
    return math.exp(log_gN(lam, delta, sums))


@dataclass
class OptimizeResult:
    lam: float
    delta: float
    g: float
    n: int
    evaluations: int
    converged: bool
    pairs: int = 0
    candidates: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "N": self.n,
            "lambda": self.lam,
            "delta": self.delta,
            "g": self.g,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "pairs": self.pairs,
            "candidates": self.candidates,
        }


@dataclass(frozen=True)
class MaximizeOptions:
    lam_grid: tuple[float, float, float] = (0.3, 1.2, 0.05)
    delta_grid: tuple[float, float, float] = (0.50, 0.95, 0.05)
    starts: int = 4
    xatol: float = 1e-10
    fatol: float = 1e-15
    maxiter: int = 4000
    tol: float = 1e-6  # maxima closer than this in g count as equal
    candidate_window: float = 1e-3


_EPS = 1e-9


def _grid(lo: float, hi: float, step: float) -> np.ndarray:
    k = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(k + 1), 12)


def maximize_gN(table: QTable | LogQSums | None, n: int,
                options: MaximizeOptions | None = None) -> OptimizeResult:
    """Grid scan over ``(lam, delta)`` then Nelder-Mead from the best cells."""
    opts = options or MaximizeOptions()
    sums = table if isinstance(table, LogQSums) else LogQSums.from_table(table, n)
    evals = 0

    def objective(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        lam = max(float(x[0]), _EPS)
        delta = min(max(float(x[1]), _EPS), 1 - _EPS)
        return -log_gN(lam, delta, sums)

    lams = _grid(*opts.lam_grid)
    deltas = _grid(*opts.delta_grid)
    cells = []
    for lam in lams:
        for delta in deltas:
            cells.append((objective(np.array([lam, delta])), float(lam), float(delta)))
    cells.sort()
    best_cells = cells[:opts.starts]

    runs = []
    half = opts.lam_grid[2] / 2, opts.delta_grid[2] / 2
    for _, lam, delta in best_cells:
        x0 = np.array([lam, delta])
        simplex = np.array([x0, x0 + [half[0], 0.0], x0 + [0.0, half[1]]])
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": opts.xatol, "fatol": opts.fatol,
                                "maxiter": opts.maxiter, "initial_simplex": simplex})
        lam_r = max(float(res.x[0]), _EPS)
        delta_r = min(max(float(res.x[1]), _EPS), 1 - _EPS)
        runs.append((math.exp(-res.fun), lam_r, delta_r, bool(res.success)))

    g_best = max(r[0] for r in runs)
    tied = sorted((r for r in runs if g_best - r[0] <= opts.tol), key=lambda r: (r[1], r[2]))
    g, lam, delta, ok = tied[0]
    agree = all(abs(r[0] - g_best) <= opts.tol for r in runs)
    candidates = [
        {"lambda": c_lam, "delta": c_delta, "g": math.exp(-c_val)}
        for c_val, c_lam, c_delta in cells
        if math.exp(-cells[0][0]) - math.exp(-c_val) <= opts.candidate_window
    ]
    return OptimizeResult(lam=lam, delta=delta, g=g, n=n, evaluations=evals,
                          converged=ok and agree, pairs=sums.pairs, candidates=candidates)
