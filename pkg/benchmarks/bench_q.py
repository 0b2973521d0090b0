"""Time the Q-block kernels: numba (compiled, parallel) against pure numpy.

    python benchmarks/bench_q.py [--max-shell 10] [--repeat 3]

Both kernels run on every (|T|, |F|) block up to the given shell; the script
checks that they agree and prints per-shell timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from growth1324 import _accel
from growth1324.combinatorics import embed_blue_nonroot, embed_forest, forest_codes, tree_codes
from growth1324.patterns import q_block


def blocks(shell: int):
    for i in range(2, shell):
        blue = np.array([embed_blue_nonroot(c) for c in tree_codes(i)], dtype=np.int64)
        red = np.array([embed_forest(c) for c in forest_codes(shell - i)], dtype=np.int64)
        yield blue, red


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--max-shell", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    # compile once outside the timings
    warm = next(blocks(3))
    q_block(*warm, use_numba=True)

    print(f"{'shell':>5} {'pairs':>9} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for s in range(3, args.max_shell + 1):
        bl = list(blocks(s))
        pairs = sum(len(b) * len(r) for b, r in bl)
        fast = [q_block(b, r, use_numba=True) for b, r in bl]
        slow = [q_block(b, r, use_numba=False) for b, r in bl]
        if not all(np.array_equal(x, y) for x, y in zip(fast, slow)):
            raise SystemExit(f"kernels disagree in shell {s}")
        t_nb = best_of(lambda: [q_block(b, r, use_numba=True) for b, r in bl], args.repeat)
        t_np = best_of(lambda: [q_block(b, r, use_numba=False) for b, r in bl], args.repeat)
        print(f"{s:5d} {pairs:9d} {t_nb:9.4f} {t_np:9.4f} {t_np / max(t_nb, 1e-9):8.1f}")


if __name__ == "__main__":
    main()
