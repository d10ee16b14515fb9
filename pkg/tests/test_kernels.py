import os
import random
import subprocess
import sys

import numpy as np
import pytest

from bipartkit import kernels
from bipartkit.multigraph import cycle_graph, path_graph, random_multigraph

COUNTERS = ("definition_counts", "product_counts", "bipartite_counts", "forest_counts")

needs_numba = pytest.mark.skipif(not kernels.USE_NUMBA, reason="numba disabled")


def _graphs():
    rng = random.Random(17)
    out = [path_graph(2), path_graph(3), cycle_graph(2), cycle_graph(5)]
    out += [random_multigraph(rng, rng.randint(2, 6), 10) for _ in range(8)]
    return [g for g in out if g.m]


@needs_numba
@pytest.mark.parametrize("name", COUNTERS)
def test_compiled_matches_interpreted(name):
    fn = getattr(kernels, name)
    for g in _graphs():
        eu, ev = g.edge_arrays
        fast = fn(g.n, eu, ev, 1)
        slow = fn.py_func(g.n, eu, ev, 1)
        assert np.array_equal(fast, slow)


@pytest.mark.parametrize("name", COUNTERS)
def test_chunking_does_not_change_counts(name):
    fn = getattr(kernels, name)
    g = random_multigraph(random.Random(9), 6, 11)
    eu, ev = g.edge_arrays
    base = fn(g.n, eu, ev, 1)
    for chunks in (2, 3, 8):
        assert np.array_equal(fn(g.n, eu, ev, chunks), base)


def test_p2_counts():
    g = path_graph(2)
    eu, ev = g.edge_arrays
    for name in COUNTERS:
        arr = getattr(kernels, name)(g.n, eu, ev, 1)
        assert arr[1, 1, 1] == 2 and arr[0, 0, 0] == 1 and arr[2, 0, 0] == 1


def test_popcount_and_binomials():
    assert kernels.popcount(np.int64(0b101101)) == 4
    table = kernels.binomial_table(6)
    assert table[6, 3] == 20 and table[4, 0] == 1


def test_poly3_mul():
    a = np.zeros((3, 1, 1), np.int64)
    b = np.zeros((3, 1, 1), np.int64)
    a[0, 0, 0] = a[1, 0, 0] = 1
    b[0, 0, 0] = b[1, 0, 0] = 1
    assert kernels.poly3_mul(a, b)[:, 0, 0].tolist() == [1, 2, 1]
    b[2, 0, 0] = 1
    with pytest.raises(ValueError):
        kernels.poly3_mul(a, b)


def test_threads_env_caps(monkeypatch):
    monkeypatch.setenv("BIPARTKIT_THREADS", "1")
    assert kernels.thread_count() == 1


def test_interpreted_fallback_via_env():
    code = (
        "from bipartkit import kernels, bipartition, multigraph as mg\n"
        "assert not kernels.USE_NUMBA\n"
        "assert not hasattr(kernels.product_counts, 'py_func')\n"
        "g = mg.cycle_graph(4)\n"
        "print(bipartition.bipartition_polynomial(g, 'forest_rep').to_json())\n"
    )
    env = dict(os.environ, BIPARTKIT_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    from bipartkit.bipartition import bipartition_polynomial

    assert out.stdout.strip() == bipartition_polynomial(cycle_graph(4)).to_json()
