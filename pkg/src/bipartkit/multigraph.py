"""Loopless multigraphs with a linear edge order, plus enumeration helpers.

Vertices are ``0..n-1``.  Vertex and edge subsets are plain ``int`` bit
masks; bit ``i`` of an edge mask refers to ``edges[i]``, so the edge order
is the list order and is what external activity is measured against.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

import numpy as np

MAX_VERTICES = 64


class GraphFormatError(ValueError):
    pass


class MaskCapacityError(ValueError):
    """Graph too large for machine-word subset masks."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        if self.n > MAX_VERTICES:
            raise MaskCapacityError(f"n={self.n} exceeds the {MAX_VERTICES}-vertex mask cap")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def full_vertex_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def full_edge_mask(self) -> int:
        return (1 << self.m) - 1

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        eu = np.array([u for u, _ in self.edges], dtype=np.int64)
        ev = np.array([v for _, v in self.edges], dtype=np.int64)
        return eu, ev

    @cached_property
    def incident(self) -> tuple[int, ...]:
        """Per vertex, the mask of incident edges."""
        inc = [0] * self.n
        for i, (u, v) in enumerate(self.edges):
            inc[u] |= 1 << i
            inc[v] |= 1 << i
        return tuple(inc)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Per vertex, the mask of neighbours."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    def degree(self, v: int) -> int:
        return self.incident[v].bit_count()

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def edges_within(self, vmask: int) -> int:
        out = 0
        for i, (u, v) in enumerate(self.edges):
            if (vmask >> u) & 1 and (vmask >> v) & 1:
                out |= 1 << i
        return out

    def with_edge_order(self, order: Sequence[int]) -> "Multigraph":
        """Return the same graph with edges listed as ``[edges[i] for i in order]``."""
        if sorted(order) != list(range(self.m)):
            raise ValueError("order must be a permutation of edge indices")
        return Multigraph(self.n, tuple(self.edges[i] for i in order))

    def relabel(self, perm: Sequence[int]) -> "Multigraph":
        """Rename vertex v to perm[v]."""
        return Multigraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))

    def add_edge(self, u: int, v: int, position: Optional[int] = None) -> "Multigraph":
        edges = list(self.edges)
        edges.insert(len(edges) if position is None else position, (u, v))
        return Multigraph(self.n, tuple(edges))

    def add_isolated(self, t: int) -> "Multigraph":
        return Multigraph(self.n + t, self.edges)

    def induced(self, vmask: int) -> "Multigraph":
        """Subgraph induced by ``vmask``, vertices renumbered in increasing order."""
        keep = [v for v in range(self.n) if (vmask >> v) & 1]
        index = {v: i for i, v in enumerate(keep)}
        return Multigraph(
            len(keep),
            tuple((index[u], index[v]) for u, v in self.edges if u in index and v in index),
        )

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, edges={list(self.edges)})"


def disjoint_union(*graphs: Multigraph) -> Multigraph:
    n = 0
    edges = []
    for g in graphs:
        edges.extend((u + n, v + n) for u, v in g.edges)
        n += g.n
    return Multigraph(n, tuple(edges))


# -- parsing / serialization ------------------------------------------------

def parse_graph(text: str, format: str = "edge-list") -> Multigraph:
    if format == "edge-list":
        return _parse_edge_list(text)
    if format == "graph6":
        return _parse_graph6(text)
    raise GraphFormatError(f"unknown format {format!r}")


def _parse_edge_list(text: str) -> Multigraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphFormatError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"non-integer header {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative header value")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"bad edge line {ln!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range in {ln!r} (n={n})")
        if u != v:  # loops do not affect B
            edges.append((u, v))
    return Multigraph(n, tuple(edges))


def _parse_graph6(text: str) -> Multigraph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = []
    for ch in s:
        b = ord(ch)
        if not 63 <= b <= 126:
            raise GraphFormatError(f"non-printable graph6 byte {b}")
        data.append(b - 63)
    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
    else:
        raise GraphFormatError("unsupported graph6 size header")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(data) - pos != need:
        raise GraphFormatError(f"graph6 body has {len(data) - pos} bytes, expected {need}")
    bits = []
    for d in data[pos:]:
        bits.extend((d >> (5 - k)) & 1 for k in range(6))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Multigraph(n, tuple(edges))


def to_edge_list(g: Multigraph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def to_graph6(g: Multigraph) -> str:
    if not g.is_simple():
        raise GraphFormatError("graph6 encodes simple graphs only")
    n = g.n
    if n < 63:
        out = [n]
    else:
        out = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    present = {(min(u, v), max(u, v)) for u, v in g.edges}
    bits = [1 if (i, j) in present else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        out.append(sum(b << (5 - t) for t, b in enumerate(bits[k:k + 6])))
    return "".join(chr(b + 63) for b in out)


# -- boundaries and neighbourhoods -----------------------------------------

def edge_boundary(g: Multigraph, w: int) -> int:
    out = 0
    for i, (u, v) in enumerate(g.edges):
        if ((w >> u) & 1) != ((w >> v) & 1):
            out |= 1 << i
    return out


def neighborhood_in(g: Multigraph, f: int, w: int) -> int:
    """Vertices outside ``w`` joined to ``w`` by an edge of ``f``."""
    out = 0
    for i, (u, v) in enumerate(g.edges):
        if not (f >> i) & 1:
            continue
        if (w >> u) & 1 and not (w >> v) & 1:
            out |= 1 << v
        elif (w >> v) & 1 and not (w >> u) & 1:
            out |= 1 << u
    return out


def degree_sequence(g: Multigraph) -> list[int]:
    return sorted(g.degree(v) for v in range(g.n))


# -- components and bipartitions -------------------------------------------

def _components_of(n: int, edges: Sequence[tuple[int, int]], vmask: Optional[int] = None) -> list[int]:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, int] = {}
    for v in range(n):
        if vmask is not None and not (vmask >> v) & 1:
            continue
        r = find(v)
        groups[r] = groups.get(r, 0) | (1 << v)
    return sorted(groups.values(), key=lambda s: (s & -s))


def components(g: Multigraph) -> list[int]:
    """Vertex masks of the connected components, ordered by least vertex."""
    return _components_of(g.n, g.edges)


def spanning_components(g: Multigraph, f: int) -> list[int]:
    """Components of the spanning subgraph (V, f)."""
    return _components_of(g.n, [e for i, e in enumerate(g.edges) if (f >> i) & 1])


def _two_coloring(n: int, edges: Sequence[tuple[int, int]]) -> Optional[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    color = [-1] * n
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if color[b] < 0:
                    color[b] = color[a] ^ 1
                    queue.append(b)
                elif color[b] == color[a]:
                    return None
    return color


def bipartition_parts(g: Multigraph) -> Optional[list[tuple[int, int]]]:
    """Per component ``(S, T)`` with the least vertex in ``S``; None if some odd cycle exists."""
    color = _two_coloring(g.n, g.edges)
    if color is None:
        return None
    parts = []
    for comp in components(g):
        first = (comp & -comp).bit_length() - 1
        s = t = 0
        for v in range(g.n):
            if (comp >> v) & 1:
                if color[v] == color[first]:
                    s |= 1 << v
                else:
                    t |= 1 << v
        parts.append((s, t))
    return parts


def spanning_parts(g: Multigraph, f: int) -> Optional[list[tuple[int, int]]]:
    """bipartition_parts of the spanning subgraph (V, f)."""
    sub = Multigraph(g.n, tuple(e for i, e in enumerate(g.edges) if (f >> i) & 1))
    return bipartition_parts(sub)


# -- spanning forests and external activity --------------------------------

@dataclass(frozen=True)
class SpanningForest:
    graph: Multigraph
    edges: int  # edge mask

    @property
    def size(self) -> int:
        return self.edges.bit_count()

    @property
    def k(self) -> int:
        return self.graph.n - self.size

    @property
    def iso(self) -> int:
        touched = 0
        for i, (u, v) in enumerate(self.graph.edges):
            if (self.edges >> i) & 1:
                touched |= (1 << u) | (1 << v)
        return self.graph.n - touched.bit_count()


def spanning_forests(g: Multigraph) -> Iterator[SpanningForest]:
    """Every acyclic edge subset exactly once (edge-order backtracking)."""
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    def rec(i: int, mask: int):
        if i == g.m:
            yield SpanningForest(g, mask)
            return
        yield from rec(i + 1, mask)
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv  # no path compression, so undo is one assignment
            yield from rec(i + 1, mask | (1 << i))
            parent[ru] = ru

    yield from rec(0, 0)


def _forest_structure(g: Multigraph, f: int):
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        if (f >> i) & 1:
            adj[u].append((v, i))
            adj[v].append((u, i))
    root = [-1] * g.n
    depth = [0] * g.n
    parent = [-1] * g.n
    pedge = [-1] * g.n
    color = [0] * g.n
    for s in range(g.n):
        if root[s] >= 0:
            continue
        root[s] = s
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b, i in adj[a]:
                if root[b] < 0:
                    root[b] = s
                    depth[b] = depth[a] + 1
                    parent[b] = a
                    pedge[b] = i
                    color[b] = color[a] ^ 1
                    queue.append(b)
    return root, depth, parent, pedge, color


def external_activity(g: Multigraph, h) -> int:
    """Edges outside ``h`` closing an even cycle in which they are the largest edge."""
    f = h.edges if isinstance(h, SpanningForest) else int(h)
    root, depth, parent, pedge, color = _forest_structure(g, f)
    ext = 0
    for i, (u, v) in enumerate(g.edges):
        if (f >> i) & 1 or root[u] != root[v] or color[u] == color[v]:
            continue
        a, b, top = u, v, -1
        while a != b:
            if depth[a] >= depth[b]:
                top = max(top, pedge[a])
                a = parent[a]
            else:
                top = max(top, pedge[b])
                b = parent[b]
        if top < i:
            ext += 1
    return ext


# -- deletions -------------------------------------------------------------

def delete_vertex(g: Multigraph, v: int) -> Multigraph:
    if not 0 <= v < g.n:
        raise IndexError(f"vertex {v} out of range")
    return g.induced(g.full_vertex_mask & ~(1 << v))


def delete_edge(g: Multigraph, e: int) -> Multigraph:
    if not 0 <= e < g.m:
        raise IndexError(f"edge {e} out of range")
    return Multigraph(g.n, g.edges[:e] + g.edges[e + 1:])


def puncture(g: Multigraph, vertex: Optional[int] = None, edge: Optional[int] = None) -> Multigraph:
    if (vertex is None) == (edge is None):
        raise ValueError("give exactly one of vertex= or edge=")
    return delete_vertex(g, vertex) if vertex is not None else delete_edge(g, edge)


def connected_bipartite_subgraphs(
    g: Multigraph, vertex: Optional[int] = None, edge: Optional[int] = None
) -> Iterator[tuple[int, int, int]]:
    """Yield ``(S, T, F)`` masks for every connected bipartite ``(S u T, F)``, F nonempty,
    containing the anchor; the least vertex of ``S u T`` lies in ``S``."""
    from bipartkit import kernels

    if (vertex is None) == (edge is None):
        raise ValueError("give exactly one of vertex= or edge=")
    if vertex is not None and not 0 <= vertex < g.n:
        raise IndexError(f"vertex {vertex} out of range")
    if edge is not None and not 0 <= edge < g.m:
        raise IndexError(f"edge {edge} out of range")
    eu, ev = g.edge_arrays
    idx = np.arange(g.m, dtype=np.int64)
    s, t, f = kernels.conn_bip_subsets(
        eu, ev, idx, -1 if edge is None else edge, -1 if vertex is None else vertex
    )
    for a, b, c in zip(s.tolist(), t.tolist(), f.tolist()):
        yield a, b, c


# -- small-graph generators -------------------------------------------------

def path_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple((i, i + 1) for i in range(k - 1)))


def cycle_graph(k: int) -> Multigraph:
    if k == 2:
        return Multigraph(2, ((0, 1), (0, 1)))
    return Multigraph(k, tuple((i, (i + 1) % k) for i in range(k)))


def dipole(k: int) -> Multigraph:
    return Multigraph(2, tuple((0, 1) for _ in range(k)))


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def complete_graph(k: int) -> Multigraph:
    return Multigraph(k, tuple((i, j) for i in range(k) for j in range(i + 1, k)))


def empty_graph(k: int) -> Multigraph:
    return Multigraph(k, ())


def all_labeled_simple_graphs(n: int) -> Iterator[Multigraph]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in product((0, 1), repeat=len(pairs)):
        yield Multigraph(n, tuple(p for p, b in zip(pairs, bits) if b))


def random_simple_graph(rng: random.Random, n: int, max_edges: int) -> Multigraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    m = rng.randint(0, min(max_edges, len(pairs)))
    chosen = rng.sample(pairs, m)
    return Multigraph(n, tuple((u, v) if rng.random() < 0.5 else (v, u) for u, v in chosen))


def random_multigraph(rng: random.Random, n: int, max_edges: int, max_mult: int = 3) -> Multigraph:
    if n < 2:
        return Multigraph(n, ())
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mult = dict.fromkeys(pairs, 0)
    edges = []
    for _ in range(rng.randint(0, max_edges)):
        open_pairs = [p for p in pairs if mult[p] < max_mult]
        if not open_pairs:
            break
        p = rng.choice(open_pairs)
        # bias toward repeating a pair so parallel classes actually occur
        if edges and rng.random() < 0.35 and mult[edges[-1]] < max_mult:
            p = edges[-1]
        mult[p] += 1
        edges.append(p)
    rng.shuffle(edges)
    return Multigraph(n, tuple(edges))


# -- trees -----------------------------------------------------------------

def tree_canonical_form(n: int, edges: Sequence[tuple[int, int]]) -> str:
    """Isomorphism-invariant string for a tree (AHU encoding rooted at the centre)."""
    if n <= 1:
        return "()"
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    centres = layer

    def encode(v, parent):
        return "(" + "".join(sorted(encode(w, v) for w in adj[v] if w != parent)) + ")"

    return min(encode(c, -1) for c in centres)


@lru_cache(maxsize=None)
def _trees_of_order(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if n == 1:
        return ((),)
    seen = {}
    for edges in _trees_of_order(n - 1):
        for v in range(n - 1):
            grown = edges + ((v, n - 1),)
            key = tree_canonical_form(n, grown)
            if key not in seen:
                seen[key] = grown
    return tuple(seen[k] for k in sorted(seen))


def enumerate_trees(n: int) -> Iterator[Multigraph]:
    """One representative per isomorphism class of trees on ``n`` vertices."""
    if n < 1:
        raise ValueError("trees need at least one vertex")
    for edges in _trees_of_order(n):
        yield Multigraph(n, edges)
