"""Optional numba acceleration.

Set ``GROWTH1324_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is installed.  ``GROWTH1324_THREADS`` caps worker threads.
"""

from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

# allow explicit thread counts above the core count (determinism checks)
os.environ.setdefault("NUMBA_NUM_THREADS", str(max(os.cpu_count() or 1, 8)))
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None
    HAVE_NUMBA = False


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() not in ("", "0", "false", "no")


USE_NUMBA = HAVE_NUMBA and not _flag("GROWTH1324_DISABLE_NUMBA")


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)

    def wrap(func):
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return wrap


if HAVE_NUMBA:
    prange = numba.prange
else:  # pragma: no cover
    prange = range


def default_threads() -> int:
    cap = os.environ.get("GROWTH1324_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            logger.warning("ignoring non-integer GROWTH1324_THREADS=%r", cap)
    return n


def set_threads(threads: int) -> int:
    """Apply a thread count to numba's pool; returns the count in effect."""
    threads = max(1, int(threads))
    if HAVE_NUMBA:
        threads = min(threads, numba.config.NUMBA_NUM_THREADS)
        numba.set_num_threads(threads)
    return threads


if HAVE_NUMBA:
    # the pool may hold more threads than cores; default to the core count
    set_threads(default_threads())
