"""Deterministic thread-pool helper.

Results always come back in input order, so parallel scans reduce exactly
like sequential ones and output never depends on the thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def resolve_threads(threads=None):
    """Explicit value, else the MAFRFS_THREADS env var, else 1."""
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("MAFRFS_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return 1


def ordered_map(fn, items, threads):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
