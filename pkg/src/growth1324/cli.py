"""Command-line interface: ``growth1324 <group> <command> [flags]``.

Every successful run produces exactly one JSON run report, printed with
``--json`` or written with ``--report PATH``; otherwise stdout carries a
human-readable rendering.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__, _accel
from .errors import CoverageError, DomainError, Growth1324Error, InputParseError, ResourceError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_COVERAGE = 4
EXIT_VERIFY = 5

EPILOG = """\
exit codes:
  0  success
  2  usage error (unknown flag, value outside the supported domain or size cap)
  3  input parse error (malformed code, path, pattern or Q-table; unreadable file)
  4  coverage error (Q-table does not cover the requested N)
  5  verification failure (some check in a verify suite failed)

environment:
  GROWTH1324_THREADS         cap on worker threads for table builds
  GROWTH1324_DISABLE_NUMBA   set to 1 to use the pure-numpy kernels
"""


@dataclass
class RunReport:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    wall_seconds: float = 0.0
    threads: int = 1
    version: str = __version__
    numba: bool = _accel.USE_NUMBA


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("epilog", EPILOG)
        kwargs.setdefault("formatter_class", argparse.RawDescriptionHelpFormatter)
        super().__init__(*args, **kwargs)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    return x


def _steps(text: str, what: str) -> tuple[int, ...]:
    from .lukasiewicz import parse_steps, validate_path

    steps = parse_steps(text)
    if not steps or not validate_path(steps):
        raise InputParseError(f"{what} {text!r} is not a valid path (steps <= 1, partial heights >= 1)")
    return steps


# ---------------------------------------------------------------------------
# commands; each returns (outputs, human text, exit status)
# ---------------------------------------------------------------------------

def cmd_trees_enum(a):
    from .combinatorics import forest_codes, tree_codes

    if a.size < 0 or (a.kind == "tree" and a.size < 1):
        raise DomainError(f"--size must be >= {1 if a.kind == 'tree' else 0} for {a.kind}s")
    if a.size > 16:
        raise ResourceError("--size above 16 is not enumerated")
    codes = tree_codes(a.size) if a.kind == "tree" else forest_codes(a.size)
    return {"count": len(codes), "codes": list(codes)}, "\n".join(codes), EXIT_OK


def cmd_q_pair(a):
    from .combinatorics import check_forest_code, check_tree_code
    from .patterns import q_count

    t = check_tree_code(a.tree)
    f = check_forest_code(a.forest)
    mode = "naive" if a.naive else "pruned"
    q = q_count(t, f, mode)
    return {"tree": t, "forest": f, "mode": mode, "q": q}, str(q), EXIT_OK


def cmd_q_table(a):
    from .qtable import build_q_table, save_q_table

    if a.max_n < 2:
        raise DomainError("--max-n must be >= 2")
    threads = a.threads if a.threads is not None else _accel.default_threads()
    table = build_q_table(a.max_n, threads=threads)
    save_q_table(table, a.out)
    meta = table.metadata
    # timing lives in the report envelope so that outputs repeat exactly
    out = {"path": str(a.out), "N": a.max_n, "records": len(table), "threads": meta["threads"],
           "threads_requested": meta["threads_requested"], "numba": meta["numba"]}
    text = f"wrote {len(table)} records for N={a.max_n} to {a.out} ({meta['seconds']} s, {meta['threads']} threads)"
    return out, text, EXIT_OK


def _sums(a):
    from .asymptotics import LogQSums
    from .qtable import build_q_table, load_q_table

    if a.max_n < 0:
        raise DomainError("--max-n must be >= 0")
    if a.max_n < 3:
        return LogQSums.from_table(None, a.max_n), None
    if a.q_table is None:
        logging.getLogger(__name__).info("no --q-table given; building N=%d in memory", a.max_n)
        return LogQSums.from_table(build_q_table(a.max_n), a.max_n), "built in memory"
    table = load_q_table(a.q_table, require_n=a.max_n)
    return LogQSums.from_table(table, a.max_n), str(a.q_table)


def cmd_bound_eval(a):
    from .asymptotics import g0, gN_eval

    sums, source = _sums(a)
    g = gN_eval(a.lam, a.delta, a.max_n, sums)
    out = {"N": a.max_n, "lambda": a.lam, "delta": a.delta, "g": g,
           "g0": g0(a.lam, a.delta), "pairs": sums.pairs, "q_table": source}
    return out, f"{g:.10f}", EXIT_OK


def cmd_bound_maximize(a):
    from .asymptotics import MaximizeOptions, maximize_gN

    sums, source = _sums(a)
    res = maximize_gN(sums, a.max_n, MaximizeOptions(tol=a.tol))
    out = res.as_dict()
    out["q_table"] = source
    text = (f"N={res.n}  g={res.g:.8f}  lambda={res.lam:.6f}  delta={res.delta:.6f}  "
            f"evaluations={res.evaluations}  converged={res.converged}")
    return out, text, EXIT_OK


def cmd_luka_count(a):
    from .lukasiewicz import LukaPattern, count_occurrences

    pat = LukaPattern(_steps(a.pattern, "pattern"))
    path = _steps(a.path, "path")
    conv = "skip-first" if a.skip_first else "all"
    c = count_occurrences(path, pat, conv)
    return {"pattern": list(pat.steps), "path": list(path), "convention": conv, "count": c}, str(c), EXIT_OK


def cmd_luka_dist(a):
    from .lukasiewicz import LukaPattern, moments, occurrence_distribution

    pat = LukaPattern(_steps(a.pattern, "pattern"))
    conv = "all" if a.all else "skip-first"
    dist = occurrence_distribution(pat, a.len, conv)
    mo = moments(dist)
    lines = ["count  paths"] + [f"{c:5d}  {v}" for c, v in sorted(dist.items())]
    lines.append(f"mean={float(mo.mean):.6f} variance={float(mo.variance):.6f} skewness={mo.skewness:.6f}")
    out = {"pattern": list(pat.steps), "n": a.len, "convention": conv,
           "histogram": {str(c): v for c, v in sorted(dist.items())},
           "paths": mo.paths, "mean": str(mo.mean), "variance": str(mo.variance),
           "mean_float": float(mo.mean), "variance_float": float(mo.variance), "skewness": mo.skewness}
    return out, "\n".join(lines), EXIT_OK


def cmd_verify(a):
    from . import verify

    kwargs = {}
    if a.suite == "gf":
        kwargs["max_k"] = a.max_k
    elif a.suite == "oracle":
        kwargs.update(n=a.n, samples=a.samples, seed=a.seed)
    checks = verify.run_checks(verify.SUITES[a.suite](**kwargs))
    failed = [c for c in checks if not c.passed]
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.seconds:.2f} s)  {c.detail.splitlines()[0]}"
             for c in checks]
    lines.append(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    out = {"suite": a.suite, "passed": not failed, "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]}
    return out, "\n".join(lines), EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the run report as JSON")
    common.add_argument("--report", type=Path, metavar="PATH", help="also write the run report to PATH")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    p = _Parser(prog="growth1324", description="Lower bounds for the growth rate of Av(1324).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, fn, help_):
        sp = group.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    trees = groups.add_parser("trees", help="plane tree and forest codes").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = sub(trees, "enum", cmd_trees_enum, "list codes in lexicographic order")
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--kind", choices=["tree", "forest"], default="tree")

    q = groups.add_parser("q", help="Q(T, F) shuffle counts").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = sub(q, "pair", cmd_q_pair, "count 1324-avoiding shuffles for one pair")
    sp.add_argument("--tree", required=True, metavar="CODE")
    sp.add_argument("--forest", required=True, metavar="CODE")
    sp.add_argument("--naive", action="store_true", help="enumerate every shuffle instead of pruned search")
    sp = sub(q, "table", cmd_q_table, "build the Q-table for all pairs with |T|+|F| <= N")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--out", type=Path, required=True)
    sp.add_argument("--threads", type=int)

    bound = groups.add_parser("bound", help="the growth-rate bound g_N").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, fn, help_ in (("eval", cmd_bound_eval, "evaluate g_N at one point"),
                            ("maximize", cmd_bound_maximize, "maximize g_N over (lambda, delta)")):
        sp = sub(bound, name, fn, help_)
        sp.add_argument("--max-n", type=int, required=True)
        sp.add_argument("--q-table", type=Path, metavar="PATH",
                        help="table file; without it N >= 3 builds the table in memory")
        if name == "eval":
            sp.add_argument("--lambda", dest="lam", type=float, required=True)
            sp.add_argument("--delta", type=float, required=True)
        else:
            sp.add_argument("--tol", type=float, default=1e-6,
                            help="maxima closer than this count as ties (default 1e-6)")

    luka = groups.add_parser("luka", help="Lukasiewicz path patterns").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    sp = sub(luka, "count", cmd_luka_count, "count pattern occurrences in one path")
    sp.add_argument("--pattern", required=True, help="comma-separated steps, e.g. 1,0,1")
    sp.add_argument("--path", required=True)
    sp.add_argument("--skip-first", action="store_true", help="ignore an occurrence at the first step")
    sp = sub(luka, "dist", cmd_luka_dist, "exact occurrence distribution over paths of one length")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--all", action="store_true", help="count occurrences at the first step too")

    ver = groups.add_parser("verify", help="verification suites").add_subparsers(
        dest="suite", required=True, parser_class=_Parser)
    sp = sub(ver, "gf", cmd_verify, "generating-function identities")
    sp.add_argument("--max-k", type=int, default=12)
    sub(ver, "means", cmd_verify, "marked-GF coefficients and finite means against enumeration")
    sp = sub(ver, "oracle", cmd_verify, "Av(1324) counts, W0 construction and Q-table invariants")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sub(ver, "embed", cmd_verify, "embeddings, bijections and Q modes")
    return p


def _threads_in_effect() -> int:
    if _accel.HAVE_NUMBA:
        return int(_accel.numba.get_num_threads())
    return 1


def run(argv: list[str] | None = None) -> tuple[int, RunReport | None]:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: --help exits 0, bad usage exits 2
        return int(exc.code or 0), None
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    command = " ".join(x for x in (a.group, getattr(a, "cmd", None) or getattr(a, "suite", None)) if x)
    inputs = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(a).items()
              if k not in ("func", "group", "cmd", "json", "report", "verbose")}
    t0 = time.perf_counter()
    try:
        outputs, text, status = a.func(a)
    except InputParseError as exc:
        return _fail(EXIT_PARSE, exc)
    except CoverageError as exc:
        return _fail(EXIT_COVERAGE, exc)
    except (DomainError, ResourceError) as exc:
        return _fail(EXIT_USAGE, exc)
    except Growth1324Error as exc:  # pragma: no cover - every subclass is mapped above
        return _fail(EXIT_USAGE, exc)
    report = RunReport(command=command, inputs=inputs, outputs=_jsonable(outputs),
                       wall_seconds=round(time.perf_counter() - t0, 4), threads=_threads_in_effect())
    doc = json.dumps(asdict(report), indent=2, sort_keys=True)
    if a.report:
        a.report.write_text(doc + "\n", encoding="utf-8")
    print(doc if a.json else text)
    return status, report


def _fail(code: int, exc: Exception) -> tuple[int, None]:
    print(f"growth1324: error: {exc}", file=sys.stderr)
    return code, None


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
