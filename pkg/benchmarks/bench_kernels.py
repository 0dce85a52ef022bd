"""Benchmark the compiled kernels against the NumPy fallback.

Times the three hot scan kernels (the per-candidate inner loops of the
greedy searches) and one full single-fold ranking per backend.

    python benchmarks/bench_kernels.py [--sizes 400,800,1600] [--classes 6]
"""

import argparse
import os
import time

import numpy as np

from mafrfs import kernels
from mafrfs.dataset import DataTable
from mafrfs.select import SelectorConfig


def make_problem(rng, n, p):
    matrix = rng.random((n, n))
    matrix = np.ascontiguousarray(np.minimum(matrix, matrix.T))
    np.fill_diagonal(matrix, 1.0)
    other = rng.random((n, n))
    other = np.ascontiguousarray(np.minimum(other, other.T))
    np.fill_diagonal(other, 1.0)
    fl = rng.random((n, p))
    fl = np.ascontiguousarray(fl / fl.sum(axis=1, keepdims=True))
    column = rng.random(n)
    return matrix, other, fl, column


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(sizes, p):
    rng = np.random.default_rng(0)
    impls = kernels.available_backends()
    print(f"backends: {', '.join(impls)} (active: {kernels.backend_name()})")
    header = f"{'kernel':<28}{'n':>6}" + "".join(f"{name:>14}" for name in impls)
    print(header)
    print("-" * len(header))
    for n in sizes:
        matrix, other, fl, column = make_problem(rng, n, p)
        rows = {
            "scan_cardinalities": lambda impl: impl.scan_cardinalities(matrix, column),
            "scan_joint_cardinalities": lambda impl: impl.scan_joint_cardinalities(
                matrix, column, other
            ),
            "scan_positive_memberships": lambda impl: impl.scan_positive_memberships(
                matrix, column, fl
            ),
        }
        for label, call in rows.items():
            cells = "".join(
                f"{time_call(call, impl) * 1e3:>12.2f}ms" for impl in impls.values()
            )
            print(f"{label:<28}{n:>6}{cells}")
    print()


def bench_ranking(n, m, p):
    """One FRFS-FD ranking per backend via the MAFRFS_PURE_PYTHON switch."""
    import subprocess
    import sys

    script = (
        "import numpy as np, time\n"
        "from mafrfs import kernels, select\n"
        "from mafrfs.dataset import DataTable\n"
        "from mafrfs.select import SelectorConfig\n"
        f"rng = np.random.default_rng(1); n, m, p = {n}, {m}, {p}\n"
        "values = rng.random((n, m))\n"
        "labels = np.concatenate([np.arange(p), rng.integers(0, p, n - p)])\n"
        "table = DataTable(values, labels, [f'f{j}' for j in range(m)],"
        " [f'c{q}' for q in range(p)])\n"
        "start = time.perf_counter()\n"
        "select.frfs_rank(table, SelectorConfig(measure='fd'))\n"
        "elapsed = time.perf_counter() - start\n"
        "print(f'{kernels.backend_name()}: {elapsed:.2f}s')\n"
    )
    print(f"full frfs/fd ranking, n={n}, m={m}, p={p}:")
    for force in ("0", "1"):
        env = dict(os.environ, MAFRFS_PURE_PYTHON=force)
        out = subprocess.run(
            [sys.executable, "-c", script], env=env, capture_output=True, text=True
        )
        print(" ", out.stdout.strip() or out.stderr.strip())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="400,800,1600",
                        help="comma-separated relation sizes")
    parser.add_argument("--classes", type=int, default=6)
    parser.add_argument("--rank-n", type=int, default=800)
    parser.add_argument("--rank-m", type=int, default=11)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.classes)
    bench_ranking(args.rank_n, args.rank_m, args.classes)


if __name__ == "__main__":
    main()
