"""The bipartition polynomial B(G; x, y, z) by six independent routes.

``definition``      double sum over W and F subset of the boundary of W
``product``         sum over W of products over outside neighbours (multigraph form)
``bipartite_rep``   sum over bipartite spanning subgraphs
``forest_rep``      sum over spanning forests weighted by (1+z)^ext
``vertex_recursion`` / ``edge_recursion``
                    deletion recursions over connected bipartite subgraphs

Every route splits G into connected components first and multiplies the
results, so the int64 bound n + m <= 62 applies per component.
"""

from __future__ import annotations

import os
from math import comb

import numpy as np

from bipartkit import kernels
from bipartkit.multigraph import Multigraph, components, spanning_parts
from bipartkit.polyring import ONE, X, MultiPoly

METHODS = (
    "definition",
    "product",
    "bipartite_rep",
    "forest_rep",
    "edge_recursion",
    "vertex_recursion",
)
SUBSET_METHODS = ("definition", "product")
EDGE_METHODS = ("bipartite_rep", "forest_rep", "edge_recursion", "vertex_recursion")

_DENSE_KERNELS = {
    "definition": kernels.definition_counts,
    "product": kernels.product_counts,
    "bipartite_rep": kernels.bipartite_counts,
    "forest_rep": kernels.forest_counts,
}


class CapacityError(ValueError):
    """Component too large for exact int64 accumulation."""


def dense_to_poly(arr: np.ndarray) -> MultiPoly:
    return MultiPoly._raw({
        (int(i), int(j), int(k)): int(arr[i, j, k]) for i, j, k in np.argwhere(arr)
    })


def _chunks(count_bits: int) -> int:
    threads = kernels.thread_count()
    if threads <= 1 or count_bits < 10:
        return 1
    return min(4 * threads, 1 << (count_bits - 6))


def _check_capacity(g: Multigraph) -> None:
    if g.n + g.m > kernels.MAX_WORD_BITS:
        raise CapacityError(
            f"component with n+m={g.n + g.m} exceeds {kernels.MAX_WORD_BITS}; coefficients may overflow int64"
        )


def _connected_pieces(g: Multigraph) -> tuple[int, list[Multigraph]]:
    """Count of isolated vertices and the nontrivial components as graphs."""
    iso = 0
    pieces = []
    for comp in components(g):
        if comp & (comp - 1) == 0:
            iso += 1
        else:
            pieces.append(g.induced(comp))
    return iso, pieces


def _dense_method(g: Multigraph, method: str) -> MultiPoly:
    _check_capacity(g)
    eu, ev = g.edge_arrays
    bits = g.n if method in SUBSET_METHODS else g.m
    return dense_to_poly(_DENSE_KERNELS[method](g.n, eu, ev, _chunks(bits)))


def _pick_method(g: Multigraph) -> str:
    return "product" if g.n <= g.m else "bipartite_rep"


def bipartition_polynomial(g: Multigraph, method: str = "auto") -> MultiPoly:
    """B(G; x, y, z) as an exact MultiPoly.

    ``method`` is one of ``METHODS`` or ``"auto"``, which picks the cheaper
    enumeration (vertex subsets or edge subsets) per component.
    """
    if method != "auto" and method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    iso, pieces = _connected_pieces(g)
    out = (ONE + X) ** iso
    for piece in pieces:
        chosen = _pick_method(piece) if method == "auto" else method
        if chosen in _DENSE_KERNELS:
            out = out * _dense_method(piece, chosen)
        else:
            out = out * _Recursion(piece, chosen.split("_")[0]).run()
    return out


# -- deletion recursions ---------------------------------------------------

class _Recursion:
    """Memoised deletion recursion on states (vertex mask R, edge mask A).

    A is always a set of edges with both ends in R.  Remainders are split
    into components and multiplied; connected states apply the anchored
    recursion with the anchor at the lowest vertex or lowest edge.
    """

    def __init__(self, g: Multigraph, mode: str):
        _check_capacity(g)
        if mode not in ("vertex", "edge"):
            raise ValueError(mode)
        self.g = g
        self.mode = mode
        self.eu, self.ev = g.edge_arrays
        self.shape = (g.n + 1, g.n + 1, g.m + 1)
        self.memo: dict[tuple[int, int], np.ndarray] = {}
        self.iso_cache: dict[int, np.ndarray] = {}
        self.inc = g.incident

    def run(self) -> MultiPoly:
        return dense_to_poly(self.poly(self.g.full_vertex_mask, self.g.full_edge_mask))

    def _isolated(self, t: int) -> np.ndarray:
        if t not in self.iso_cache:
            a = np.zeros(self.shape, np.int64)
            for i in range(t + 1):
                a[i, 0, 0] = comb(t, i)
            self.iso_cache[t] = a
        return self.iso_cache[t]

    def _split(self, r: int, a: int) -> list[tuple[int, int]]:
        parent = {}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        rr = r
        while rr:
            low = rr & -rr
            v = low.bit_length() - 1
            parent[v] = v
            rr ^= low
        aa = a
        while aa:
            low = aa & -aa
            i = low.bit_length() - 1
            aa ^= low
            ru, rv = find(self.g.edges[i][0]), find(self.g.edges[i][1])
            if ru != rv:
                parent[ru] = rv
        groups: dict[int, int] = {}
        for v in parent:
            root = find(v)
            groups[root] = groups.get(root, 0) | (1 << v)
        out = []
        for vm in groups.values():
            em = 0
            vv = vm
            while vv:
                low = vv & -vv
                em |= self.inc[low.bit_length() - 1]
                vv ^= low
            out.append((vm, a & em))
        return out

    def poly(self, r: int, a: int) -> np.ndarray:
        iso = 0
        acc = None
        for vm, em in self._split(r, a):
            if em == 0:
                iso += vm.bit_count()
                continue
            part = self.connected(vm, em)
            acc = part if acc is None else kernels.poly3_mul(acc, part)
        if acc is None:
            return self._isolated(iso)
        if iso:
            acc = kernels.poly3_mul(acc, self._isolated(iso))
        return acc

    def connected(self, c: int, ac: int) -> np.ndarray:
        key = (c, ac)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        idx = np.array([i for i in range(self.g.m) if (ac >> i) & 1], dtype=np.int64)
        if self.mode == "vertex":
            v = (c & -c).bit_length() - 1
            rest = self.poly(c & ~(1 << v), ac & ~self.inc[v])
            total = rest.copy()
            total[1:] += rest[:-1]  # (1 + x) * B(G - v)
            s, t, f = kernels.conn_bip_subsets(self.eu, self.ev, idx, -1, v)
        else:
            e = (ac & -ac).bit_length() - 1
            total = self.poly(c, ac & ~(1 << e)).copy()
            s, t, f = kernels.conn_bip_subsets(self.eu, self.ev, idx, e, -1)
        total = total + self._anchored_sum(c, ac, s, t, f)
        self.memo[key] = total
        return total

    def _anchored_sum(self, c, ac, s, t, f) -> np.ndarray:
        """Sum of z^|F| (x^|S| y^|T| + x^|T| y^|S|) B(G - (S u T)) grouped by S u T."""
        out = np.zeros(self.shape, np.int64)
        if s.shape[0] == 0:
            return out
        u = s | t
        uniq, inv = np.unique(u, return_inverse=True)
        ps = np.bitwise_count(s).astype(np.int64)
        pt = np.bitwise_count(t).astype(np.int64)
        pf = np.bitwise_count(f).astype(np.int64)
        dense = np.zeros((uniq.shape[0],) + self.shape, np.int64)
        np.add.at(dense, (inv, ps, pt, pf), 1)
        np.add.at(dense, (inv, pt, ps, pf), 1)
        for j, um in enumerate(uniq.tolist()):
            rem = c & ~um
            touched = 0
            uu = um
            while uu:
                low = uu & -uu
                touched |= self.inc[low.bit_length() - 1]
                uu ^= low
            out += kernels.poly3_mul(dense[j], self.poly(rem, ac & ~touched))
        return out


# -- phi and the bipartite assembly ----------------------------------------

def phi(g: Multigraph, f: int) -> MultiPoly:
    """z-free weight of the spanning subgraph (V, F); zero unless bipartite."""
    parts = spanning_parts(g, f)
    if parts is None:
        return MultiPoly()
    out = ONE
    iso = 0
    for s, t in parts:
        a, b = s.bit_count(), t.bit_count()
        if b == 0:
            iso += 1
            continue
        lo, hi = min(a, b), max(a, b)
        out = out * (MultiPoly.monomial(hi, lo) + MultiPoly.monomial(lo, hi))
    return out * (ONE + X) ** iso


def assemble_from_phi(g: Multigraph) -> MultiPoly:
    """Sum over all F of z^|F| phi_G(F)."""
    _check_capacity(g)
    acc: dict = {}
    for f in range(1 << g.m):
        size = f.bit_count()
        for (ex, ey, _), c in phi(g, f).items():
            key = (ex, ey, size)
            acc[key] = acc.get(key, 0) + c
    return MultiPoly(acc)


def definition_cost(g: Multigraph) -> int:
    """Inner-loop iterations of the definition method: sum over W of 2^|boundary W|."""
    if g.n == 0:
        return 1
    if g.n > 26:
        raise CapacityError("cost estimate needs n <= 26")
    eu, ev = g.edge_arrays
    w = np.arange(1 << g.n, dtype=np.int64)
    b = np.zeros(w.shape, np.int64)
    for u, v in zip(eu.tolist(), ev.tolist()):
        b += ((w >> u) & 1) ^ ((w >> v) & 1)
    counts = np.bincount(b)
    return sum(int(c) << k for k, c in enumerate(counts.tolist()))

def definition_budget() -> int:
    return int(os.environ.get("BIPARTKIT_DEFINITION_BUDGET", str(1 << 30)))
