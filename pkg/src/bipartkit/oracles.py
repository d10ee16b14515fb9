"""Brute-force reference values computed straight from the defining sums.

Nothing here touches the bipartition polynomial.  Vertex-subset kinds loop
over all 2^n subsets, edge-subset kinds over all 2^m; both are vectorised
with numpy.  Output variables follow the same slots as ``derived``.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from bipartkit.multigraph import Multigraph, components
from bipartkit.polyring import MultiPoly

KINDS = (
    "domination",
    "cut",
    "euler",
    "matching",
    "independence",
    "vdw",
    "bicolored",
    "ising",
    "degree_gen",
)
VERTEX_KINDS = ("domination", "cut", "independence", "ising", "degree_gen")
MAX_VERTEX_BITS = 20
MAX_EDGE_BITS = 22


class BudgetExceeded(RuntimeError):
    pass


def _histogram(*axes: np.ndarray, weights: np.ndarray | None = None) -> MultiPoly:
    """Sum of monomials with exponents given by up to three aligned arrays."""
    cols = [a.astype(np.int64) for a in axes]
    while len(cols) < 3:
        cols.append(np.zeros_like(cols[0]))
    keys = np.stack(cols, axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    if weights is None:
        counts = np.bincount(inv, minlength=len(uniq))
    else:
        counts = np.zeros(len(uniq), dtype=object)
        np.add.at(counts, inv, weights.astype(object))
    return MultiPoly({tuple(int(v) for v in row): int(c) for row, c in zip(uniq, counts)})


def _bits(count: int) -> np.ndarray:
    return np.arange(1 << count, dtype=np.int64)


def _vertex_side(g: Multigraph, kind: str) -> MultiPoly:
    n = g.n
    w = _bits(n)
    size = np.bitwise_count(w)
    member = [(w >> v) & 1 for v in range(n)]
    if kind == "degree_gen":
        return _histogram(np.array([g.degree(v) for v in range(n)])) if n else MultiPoly()
    if kind == "domination":
        closed = w.copy()
        for v in range(n):
            closed |= np.where(member[v] == 1, g.adjacency[v], 0)
        keep = closed == (1 << n) - 1
        return _histogram(size[keep])
    if kind == "independence":
        ok = np.ones(w.shape, bool)
        for u, v in g.edges:
            ok &= (member[u] & member[v]) == 0
        return _histogram(size[ok])
    boundary = np.zeros(w.shape, np.int64)
    for u, v in g.edges:
        boundary += member[u] ^ member[v]
    if kind == "cut":
        k = len(components(g))
        return _histogram(np.zeros_like(w), np.zeros_like(w), boundary).scale_div(2 ** k)
    if kind == "ising":
        return _histogram(n - size, g.m - boundary)
    raise ValueError(kind)


def _edge_side(g: Multigraph, kind: str) -> MultiPoly:
    n, m = g.n, g.m
    f = _bits(m)
    size = np.bitwise_count(f)
    deg = np.zeros((n, f.shape[0]), np.int64)
    for i, (u, v) in enumerate(g.edges):
        bit = (f >> i) & 1
        deg[u] += bit
        deg[v] += bit
    odd = (deg & 1).sum(axis=0) if n else np.zeros_like(f)
    zeros = np.zeros_like(f)
    if kind == "euler":
        keep = odd == 0
        return _histogram(zeros[keep], zeros[keep], size[keep])
    if kind == "matching":
        keep = (deg <= 1).all(axis=0) if n else np.ones(f.shape, bool)
        return _histogram(size[keep])
    if kind == "vdw":
        return _histogram(odd, size)
    if kind == "bicolored":
        return _histogram(
            (deg == 0).sum(axis=0), zeros, size, weights=_proper_colourings(g)
        )
    raise ValueError(kind)


def _proper_colourings(g: Multigraph) -> np.ndarray:
    """Per edge subset F, the number of 2-colourings of V under which F is properly coloured."""
    n, m = g.n, g.m
    c = _bits(n)
    bichrom = np.zeros(c.shape, np.int64)
    for i, (u, v) in enumerate(g.edges):
        bichrom |= (((c >> u) ^ (c >> v)) & 1) << i
    table = np.bincount(bichrom, minlength=1 << m).astype(np.int64)
    # superset sums: table[F] = #{colourings whose bichromatic set contains F}
    for i in range(m):
        view = table.reshape(-1, 2, 1 << i)
        view[:, 0, :] += view[:, 1, :]
    return table


def oracle_poly(g: Multigraph, kind: str) -> MultiPoly:
    """The generating function ``kind`` of G by exhaustive enumeration."""
    if kind not in KINDS:
        raise ValueError(f"unknown oracle kind {kind!r}")
    if kind in VERTEX_KINDS:
        if g.n > MAX_VERTEX_BITS:
            raise BudgetExceeded(f"n={g.n} exceeds {MAX_VERTEX_BITS}")
        return _vertex_side(g, kind)
    if g.m > MAX_EDGE_BITS or (kind == "bicolored" and g.n > MAX_VERTEX_BITS):
        raise BudgetExceeded(f"m={g.m} exceeds {MAX_EDGE_BITS}")
    return _edge_side(g, kind)


def bipartition_bruteforce(g: Multigraph) -> MultiPoly:
    """B(G) from its defining double sum, using plain Python sets."""
    if g.n > 12:
        raise BudgetExceeded("literal enumeration is limited to n <= 12")
    terms: dict[tuple[int, int, int], int] = {}
    vertices = range(g.n)
    for r in range(g.n + 1):
        for w in combinations(vertices, r):
            inside = set(w)
            boundary = [(u, v) for u, v in g.edges if (u in inside) != (v in inside)]
            for s in range(len(boundary) + 1):
                for f in combinations(boundary, s):
                    outside = {v if u in inside else u for u, v in f}
                    key = (len(inside), len(outside), len(f))
                    terms[key] = terms.get(key, 0) + 1
    return MultiPoly(terms)
