"""Named pass/fail verification suites.

Each suite is a list of checks; a check either returns ``(ok, detail)`` or
raises, which counts as a failure with the exception text as detail.
"""

from __future__ import annotations

import math
import time
import traceback
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import asymptotics as asy
from . import lukasiewicz as lk
from . import oracle
from .combinatorics import (
    PlaneForest,
    catalan,
    embed_blue_tree,
    embed_red_tree,
    forest_codes,
    forest_to_luka_path,
    hasse_graph,
    luka_path_to_forest,
    luka_path_to_tree,
    tree_codes,
    tree_edges,
    tree_from_hasse,
    tree_to_luka_path,
)
from .patterns import guard_threshold, q_count
from .qtable import build_q_table, shell_count
from .series import (
    classic_series,
    closed_form_coeffs,
    finite_moments,
    height_equation_residual,
    kernel_residual,
    luka_height_series,
    luka_pattern_series,
    marked_gf_coeffs,
    pattern_equation_rhs,
)

ANCHOR_PATH = (1, 1, 1, 1, 0, -2, 1, 0, 1, 0, 1, 1, -3, -2, 1, 0, 1, -1)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float

    def as_dict(self) -> dict:
        return asdict(self)


CheckFn = Callable[[], tuple[bool, str]]


def run_checks(checks: list[tuple[str, CheckFn]]) -> list[Check]:
    out = []
    for name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
            detail += "\n" + traceback.format_exc(limit=3)
        out.append(Check(name, bool(ok), detail, round(time.perf_counter() - t0, 4)))
    return out


def _first_mismatch(pairs) -> tuple[bool, str]:
    n = 0
    for label, got, want in pairs:
        n += 1
        if got != want:
            return False, f"{label}: got {got}, expected {want}"
    return True, f"{n} comparisons"


def small_patterns(max_m: int = 3) -> list[tuple[int, ...]]:
    """Every path pattern with at most ``max_m`` steps."""
    return [p for m in range(1, max_m + 1) for p in lk.all_paths(m)]


def _rc(perm) -> tuple[int, ...]:
    n = len(perm)
    return tuple(n + 1 - v for v in reversed(perm))


# ---------------------------------------------------------------------------
# gf
# ---------------------------------------------------------------------------

def gf_checks(max_k: int = 12) -> list[tuple[str, CheckFn]]:
    pats = small_patterns(3)
    series = {}

    def L(p):
        if p not in series:
            series[p] = luka_pattern_series(p, max_k)
        return series[p]

    def catalan_coeffs():
        return _first_mismatch(
            (f"{list(p)} k={k}", L(p).at_u1()[k], catalan(k))
            for p in pats for k in range(1, max_k + 1))

    def totals_series():
        return _first_mismatch(
            (f"{list(p)} k={k}", L(p).du_at_u1(1)[k], lk.total_occurrences_closed_form(p, k))
            for p in pats for k in range(1, max_k + 1))

    def totals_exhaustive():
        rows = {k: lk.path_array(k) for k in range(1, max_k + 1)}
        return _first_mismatch(
            (f"{list(p)} k={k}",
             int(lk.count_occurrences_array(rows[k], p, "skip-first").sum()),
             lk.total_occurrences_closed_form(p, k))
            for p in pats for k in range(1, max_k + 1))

    def distributions():
        def cmp():
            for p in pats:
                s = L(p)
                for k in range(1, max_k + 1):
                    got = {c: int(s.coeff(k, c)) for c in range(s.U + 1) if s.coeff(k, c)}
                    yield f"{list(p)} k={k}", got, lk.occurrence_distribution(p, k)
        return _first_mismatch(cmp())

    def fixed_point_and_kernel():
        for p in pats:
            pat = lk.LukaPattern(p)
            if pattern_equation_rhs(L(p), pat) != L(p):
                return False, f"{list(p)}: series is not a fixed point"
            if not kernel_residual(pat, L(p)).is_zero():
                return False, f"{list(p)}: kernel residual nonzero"
        return True, f"{len(pats)} patterns"

    def height_equation():
        H = luka_height_series(max_k, max_k + 1)
        if not height_equation_residual(H).is_zero():
            return False, "residual nonzero"
        return _first_mismatch((f"k={k}", H.at_u1()[k], catalan(k)) for k in range(1, max_k + 1))

    def classic():
        T = classic_series("T", max_k).zcoeffs()
        F = classic_series("F", max_k).zcoeffs()
        return _first_mismatch(
            [(f"T k={k}", T[k], catalan(k - 1)) for k in range(1, max_k + 1)]
            + [(f"F k={k}", F[k], catalan(k)) for k in range(max_k + 1)])

    def shifted_nonnegative():
        for p in pats:
            if (L(p).subs_u_shift().a < 0).any():
                return False, f"{list(p)}: negative coefficient after u -> v + 1"
        return True, f"{len(pats)} patterns"

    def anchor_path():
        got = lk.count_occurrences(ANCHOR_PATH, (1, 0, 1))
        return lk.validate_path(ANCHOR_PATH) and got == 3, f"{got} occurrences"

    return [
        ("gf.catalan", catalan_coeffs),
        ("gf.totals_series", totals_series),
        ("gf.totals_exhaustive", totals_exhaustive),
        ("gf.distribution_vs_dp", distributions),
        ("gf.fixed_point_kernel", fixed_point_and_kernel),
        ("gf.height_equation", height_equation),
        ("gf.classic_series", classic),
        ("gf.shift_nonnegative", shifted_nonnegative),
        ("gf.anchor_path_count", anchor_path),
    ]


# ---------------------------------------------------------------------------
# means
# ---------------------------------------------------------------------------

def means_checks(max_size: int = 10, max_d: int = 5, max_forest: int = 3) -> list[tuple[str, CheckFn]]:
    def family_B():
        def cmp():
            for ell in range(2, max_size + 1):
                for d in range(1, min(max_d, ell - 1) + 1):
                    for i in range(1, ell):
                        for t in tree_codes(i):
                            e = oracle.empirical_means("beta", ell=ell, d=d, tree=t)
                            yield (f"ell={ell} d={d} T={t}", (e.objects, e.total, e.ordered_pairs),
                                   closed_form_coeffs("B", ell, d=d, i=i))
                            if i >= 3:
                                break  # closed form depends on |T| only; one witness suffices
        return _first_mismatch(cmp())

    def family_G():
        return _first_mismatch(
            (f"k={k} d={d} j={j}", (e.objects, e.total, e.ordered_pairs), closed_form_coeffs("G", k, d=d, j=j))
            for k in range(1, max_size + 1) for d in range(1, max_d + 1) for j in range(k)
            for e in [oracle.empirical_means("gamma", k=k, d=d, j=j)])

    def family_R():
        def cmp():
            for k in range(1, max_size + 1):
                tot: dict[str, int] = {}
                pairs: dict[str, int] = {}
                for t in tree_codes(k):
                    rho, _ = oracle.fringe_profile(t, max_forest)
                    for f, c in rho.items():
                        tot[f] = tot.get(f, 0) + c
                        pairs[f] = pairs.get(f, 0) + c * (c - 1)
                for m in range(1, max_forest + 1):
                    for f in forest_codes(m):
                        yield (f"k={k} F={f}", (catalan(k - 1), tot.get(f, 0), pairs.get(f, 0)),
                               closed_form_coeffs("R", k, m=m))
        return _first_mismatch(cmp())

    def family_L():
        def cmp():
            for f in (c for m in range(1, max_forest + 1) for c in forest_codes(m)):
                w = tuple(forest_to_luka_path(f))
                for k in range(1, max_size + 1):
                    yield f"F={f} k={k}", oracle.empirical_means("rho_plus", k=k, forest=f, cap=max_size).prop_mean, \
                        finite_moments("L", k, pattern=w).prop_mean
        return _first_mismatch(cmp())

    def series_vs_closed():
        for ell in range(3, max_size + 1):
            for d in range(1, min(max_d, ell - 1) + 1):
                marked_gf_coeffs("B", ell, d=d, i=1)
        for k in range(1, max_size + 1):
            for d in range(1, max_d + 1):
                for j in range(3):
                    marked_gf_coeffs("G", k, d=d, j=j)
            for m in range(1, max_forest + 1):
                marked_gf_coeffs("R", k, m=m)
        return True, "series coefficients equal closed forms"

    def anchors():
        return _first_mismatch([
            ("beta ell=5 d=2", oracle.empirical_means("beta", ell=5, d=2, tree="()").prop_mean, Fraction(2, 5)),
            ("gamma k=3 d=2 j=0", oracle.empirical_means("gamma", k=3, d=2, j=0).prop_mean, Fraction(1, 2)),
        ])

    def rho_trend():
        vals = [oracle.empirical_means("rho", k=k, forest="()").prop_mean for k in range(4, max_size + 1)]
        ok = all(a > b for a, b in zip(vals, vals[1:])) and vals[-1] > Fraction(1, 8)
        return ok, "decreasing toward 1/8: " + ", ".join(map(str, vals))

    def limit_normalization():
        delta, lam = 0.7, 0.8
        beta = math.fsum(catalan(i - 1) * asy.mu_beta(i, delta) for i in range(1, 400))
        gamma = math.fsum(asy.mu_gamma(j, lam, delta) for j in range(300))
        tail = asy.mu_gamma_gt(3, lam, delta) - math.fsum(asy.mu_gamma(j, lam, delta) for j in range(4, 300))
        ok = abs(beta - 1) < 1e-9 and abs(gamma - 1) < 1e-9 and abs(tail) < 1e-9
        return ok, f"sum beta={beta:.12f}, sum gamma={gamma:.12f}, tail residue={tail:.1e}"

    def delta_star():
        # the maximum is flat, so locate it as the root of a central-difference
        # slope rather than by comparing function values
        worst = 0.0
        step = 1e-5
        for lam in np.linspace(0.3, 1.2, 20):
            def slope(d):
                return asy.log_E(lam, d + step) - asy.log_E(lam, d - step)
            root = brentq(slope, 1e-3, 1 - 1e-3, xtol=1e-15)
            worst = max(worst, abs(root - asy.delta_star(lam)))
        return worst < 1e-8, f"max |closed - numeric| = {worst:.2e} over 20 values of lambda"

    return [
        ("means.B_closed_form", family_B),
        ("means.G_closed_form", family_G),
        ("means.R_closed_form", family_R),
        ("means.L_vs_fringe", family_L),
        ("means.series_vs_closed_form", series_vs_closed),
        ("means.anchor_values", anchors),
        ("means.rho_trend", rho_trend),
        ("means.limit_normalization", limit_normalization),
        ("means.delta_star", delta_star),
    ]


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

TINY_W = [oracle.WParams(*p) for p in [(1, 2, 2, 1), (1, 3, 3, 2), (2, 2, 2, 1), (1, 3, 3, 1), (1, 2, 4, 2)]]


def oracle_checks(n: int = 8, samples: int = 10_000, seed: int = 0,
                  params: oracle.WParams = oracle.WParams(3, 4, 4, 2)) -> list[tuple[str, CheckFn]]:
    drawn: list = []

    def get_samples():
        if not drawn:
            drawn.extend(oracle.sample_W0(params, samples, seed))
        return drawn

    def avoiders():
        pruned = [oracle.count_avoiders(i) for i in range(1, n + 1)]
        naive = [oracle.count_avoiders_naive(i) for i in range(1, n + 1)]
        return pruned == naive, f"{pruned}"

    def w0_exhaustive():
        for p in TINY_W:
            els = list(oracle.enumerate_W0(p))
            distinct = len({e.perm for e in els})
            if distinct != p.count_formula or not oracle.all_avoid_1324(els):
                return False, f"{p}: {distinct} distinct, formula {p.count_formula}"
        return True, f"{len(TINY_W)} parameter sets"

    def w0_samples_avoid():
        els = get_samples()
        return oracle.all_avoid_1324(els), f"{len(els)} samples at {params}, seed {seed}"

    def w0_structure():
        for e in get_samples()[:200]:
            hasse = hasse_graph(e.perm)
            if not set(e.tree_edges) <= hasse:
                return False, f"{e.perm}: tree edge outside Hasse graph"
            if len(e.tree_edges) != len(e.perm) - len(e.red) - len(e.blue):
                return False, f"{e.perm}: trees do not span"
            rc = _rc(e.perm)
            n_ = len(e.perm)
            if [tree_from_hasse(e.perm, r).code for r in e.red_roots] != list(e.red):
                return False, f"{e.perm}: red trees not recovered"
            if [tree_from_hasse(rc, n_ - 1 - b).code for b in e.blue_roots] != list(e.blue):
                return False, f"{e.perm}: blue trees not recovered"
            lr_min = [i for i, v in enumerate(e.perm) if v == min(e.perm[:i + 1])]
            rl_max = [i for i, v in enumerate(e.perm) if v == max(e.perm[i:])]
            roots = sorted([(r, "R") for r in e.red_roots] + [(b, "B") for b in e.blue_roots])
            if (not set(e.red_roots) <= set(lr_min) or not set(e.blue_roots) <= set(rl_max)
                    or [c for _, c in roots] != ["R", "B"] * len(e.blue) + ["R"]):
                return False, f"{e.perm}: roots are not alternating LR minima / RL maxima"
        return True, "200 samples"

    def w0_deterministic():
        a = oracle.sample_W0(params, 5, seed)
        b = oracle.sample_W0(params, 50, seed)[:5]
        return a == b, "sample i depends only on (params, seed, i)"

    def qtable_invariants():
        table = build_q_table(min(n, 8))
        shells = table.tree_size + table.forest_size
        counts = np.bincount(shells, minlength=table.n + 1)
        for s in range(3, table.n + 1):
            if counts[s] != shell_count(s):
                return False, f"shell {s}: {counts[s]} records, expected {shell_count(s)}"
        upper = np.array([comb(int(t) - 1 + int(f), int(f)) for t, f in zip(table.tree_size, table.forest_size)])
        if not ((table.q >= 2) & (table.q <= upper)).all():
            return False, "a record lies outside 2 <= q <= C(|T|-1+|F|, |F|)"
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(table), size=min(1000, len(table)), replace=False)
        bad = [i for i in pick if q_count(table.tree[i], table.forest[i], "naive") != table.q[i]]
        return not bad, f"{len(table)} records, {len(pick)} spot-checked against naive"

    return [
        ("oracle.avoider_counts", avoiders),
        ("oracle.W0_exhaustive", w0_exhaustive),
        ("oracle.W0_samples_avoid", w0_samples_avoid),
        ("oracle.W0_structure", w0_structure),
        ("oracle.W0_deterministic", w0_deterministic),
        ("oracle.qtable_invariants", qtable_invariants),
    ]


# ---------------------------------------------------------------------------
# embed
# ---------------------------------------------------------------------------

def embed_checks(max_tree: int = 7, max_shell: int = 8, max_k: int = 10,
                 max_forest: int = 3) -> list[tuple[str, CheckFn]]:
    def hasse_round_trip():
        def cmp():
            for n in range(1, max_tree + 1):
                for t in tree_codes(n):
                    red = embed_red_tree(t)
                    yield f"red {t}", tree_from_hasse(red).code, t
                    yield f"red edges {t}", hasse_graph(red), tree_edges(t)
                    yield f"blue {t}", tree_from_hasse(_rc(embed_blue_tree(t))).code, t
        return _first_mismatch(cmp())

    def hasse_unique():
        # every tree is realized by exactly one permutation whose Hasse graph
        # is a tree growing from the first point
        from itertools import permutations

        for n in range(1, max_tree + 1):
            seen: dict[str, tuple] = {}
            for perm in permutations(range(1, n + 1)):
                if perm[0] != 1:
                    continue
                edges = hasse_graph(perm)
                if len(edges) != n - 1:
                    continue
                code = tree_from_hasse(perm).code
                if code in seen:
                    return False, f"{code} realized by {seen[code]} and {perm}"
                seen[code] = perm
            if len(seen) != catalan(n - 1):
                return False, f"n={n}: {len(seen)} realizable trees, expected {catalan(n - 1)}"
        return True, f"unique realizations for all trees up to {max_tree} vertices"

    def path_round_trip():
        def cmp():
            for n in range(1, max_tree + 1):
                for t in tree_codes(n):
                    p = tree_to_luka_path(t)
                    yield f"tree {t}", (lk.validate_path(p), luka_path_to_tree(p).code), (True, t)
                for f in forest_codes(n):
                    yield f"forest {f}", luka_path_to_forest(forest_to_luka_path(f)).code, f
        return _first_mismatch(cmp())

    def q_anchor():
        return _first_mismatch([
            ("Q(((()())), ()(()))", q_count("((()()))", "()(())"), 15),
            ("naive", q_count("((()()))", "()(())", "naive"), 15),
            ("guard 132", guard_threshold([1, 3, 2]), 3),
            ("guard 123", guard_threshold([1, 2, 3]), math.inf),
        ])

    def q_modes():
        def cmp():
            for s in range(1, max_shell + 1):
                for i in range(1, s + 1):
                    for t in tree_codes(i):
                        for f in forest_codes(s - i):
                            yield f"({t}, {f})", q_count(t, f), q_count(t, f, "naive")
        return _first_mismatch(cmp())

    def fringe_per_tree():
        def cmp():
            for n in range(1, max_tree + 1):
                for t in tree_codes(n):
                    path = tree_to_luka_path(t)
                    rho, plus = oracle.fringe_profile(t, max_forest)
                    for m in range(1, max_forest + 1):
                        for f in forest_codes(m):
                            w = forest_to_luka_path(f)
                            h = PlaneForest.from_code(f).h
                            yield f"plus {t} {f}", plus.get(f, 0), lk.count_occurrences(path, w, "skip-first")
                            yield f"rho {t} {f}", rho.get(f, 0), oracle.exact_forest_path_count(path, w, h)
        return _first_mismatch(cmp())

    def fringe_totals():
        def cmp():
            for k in range(1, max_k + 1):
                plus_tot: dict[str, int] = {}
                for t in tree_codes(k + 1):
                    for f, c in oracle.fringe_profile(t, max_forest)[1].items():
                        plus_tot[f] = plus_tot.get(f, 0) + c
                for m in range(1, max_forest + 1):
                    for f in forest_codes(m):
                        w = forest_to_luka_path(f)
                        yield f"k={k} F={f}", plus_tot.get(f, 0), lk.total_occurrences(w, k)
        return _first_mismatch(cmp())

    return [
        ("embed.hasse_round_trip", hasse_round_trip),
        ("embed.hasse_unique", hasse_unique),
        ("embed.path_round_trip", path_round_trip),
        ("embed.q_anchor", q_anchor),
        ("embed.q_mode_equivalence", q_modes),
        ("embed.fringe_per_tree", fringe_per_tree),
        ("embed.fringe_totals", fringe_totals),
    ]


SUITES = {
    "gf": gf_checks,
    "means": means_checks,
    "oracle": oracle_checks,
    "embed": embed_checks,
}
