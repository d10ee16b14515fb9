"""Compiled versus interpreted subset kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs on the same connected graphs twice: once through the numba
dispatcher and once through its ``.py_func`` (the identical source run by the
interpreter).  Compilation happens in a warm-up call and is not timed.  The
interpreted runs are kept small because they are orders of magnitude slower.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from bipartkit import kernels
from bipartkit.multigraph import Multigraph, components, cycle_graph, random_multigraph

CASES = {
    "definition_counts": "n",
    "product_counts": "n",
    "bipartite_counts": "m",
    "forest_counts": "m",
}


def connected_graph(seed: int, n: int, m: int) -> Multigraph:
    rng = random.Random(seed)
    while True:
        g = random_multigraph(rng, n, m, max_mult=2)
        if g.m == m and len(components(g)) == 1:
            return g


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not kernels.USE_NUMBA:
        raise SystemExit("numba is disabled (BIPARTKIT_NUMBA=0); nothing to compare")

    graphs = [cycle_graph(8), connected_graph(1, 9, 12), connected_graph(2, 12, 16)]
    print(f"{'kernel':<20}{'graph':<12}{'bits':>5}{'numba s':>12}{'python s':>12}{'speedup':>10}")
    for name, axis in CASES.items():
        fn = getattr(kernels, name)
        for g in graphs:
            eu, ev = g.edge_arrays
            call = (g.n, eu, ev, 1)
            fn(*call)  # compile
            fast, a = best_of(fn, call, args.repeat)
            slow, b = best_of(fn.py_func, call, 1)
            assert np.array_equal(a, b)
            bits = g.n if axis == "n" else g.m
            label = f"n={g.n},m={g.m}"
            print(f"{name:<20}{label:<12}{bits:>5}{fast:>12.5f}{slow:>12.3f}{slow / fast:>9.0f}x")


if __name__ == "__main__":
    main()
