"""Graph collections shared by the test modules.

``suite_one`` is the standard mixed collection: every labeled simple graph
on at most five vertices, 200 random simple graphs with n <= 9 and 100
random multigraphs with n <= 6 and edge multiplicity <= 3.  Seeds are fixed
so every run sees the same graphs.
"""

from __future__ import annotations

import random
from functools import lru_cache

from bipartkit.bipartition import bipartition_polynomial
from bipartkit.multigraph import (
    Multigraph,
    all_labeled_simple_graphs,
    random_multigraph,
    random_simple_graph,
)

SEED = 20240615


@lru_cache(maxsize=None)
def labeled_small(max_n: int = 5) -> tuple[Multigraph, ...]:
    return tuple(g for n in range(max_n + 1) for g in all_labeled_simple_graphs(n))


@lru_cache(maxsize=None)
def random_simple(count: int = 200) -> tuple[Multigraph, ...]:
    rng = random.Random(SEED)
    return tuple(random_simple_graph(rng, rng.randint(1, 9), 18) for _ in range(count))


@lru_cache(maxsize=None)
def random_multi(count: int = 100) -> tuple[Multigraph, ...]:
    rng = random.Random(SEED + 1)
    return tuple(random_multigraph(rng, rng.randint(1, 6), 12, 3) for _ in range(count))


def suite_one() -> tuple[Multigraph, ...]:
    return labeled_small() + random_simple() + random_multi()


def small_mixed() -> tuple[Multigraph, ...]:
    """A cheaper slice for the slower checks: n <= 4 plus a few random graphs."""
    return labeled_small(4) + random_simple()[:40] + random_multi()[:40]


@lru_cache(maxsize=None)
def poly(g: Multigraph):
    return bipartition_polynomial(g)
