"""Executable checks of identities that follow from the representations of B.

Each check computes its left side by direct enumeration over forests or
vertex subsets and its right side from B, then compares exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from bipartkit.bipartition import bipartition_polynomial
from bipartkit.derived import derive
from bipartkit.invariants import graph_stats
from bipartkit.multigraph import (
    Multigraph,
    edge_boundary,
    external_activity,
    spanning_forests,
    spanning_parts,
)
from bipartkit.oracles import BudgetExceeded
from bipartkit.polyring import ONE, Z, MultiPoly, substitute_rational

IDENTITIES = (
    "euler_forest_sum",
    "euler_vertex_sum",
    "domination_count",
    "activity_sum",
    "bicolored_no_iso",
    "planar_dual",
)
MAX_EDGES = 22
MAX_VERTICES = 20

Value = Union[MultiPoly, Fraction, int]


class MissingDual(ValueError):
    pass


@dataclass(frozen=True)
class IdentityReport:
    id: str
    left: Value
    right: Value
    passed: bool

    def to_json_obj(self) -> dict:
        def enc(v):
            if isinstance(v, MultiPoly):
                return v.to_json_obj()
            return str(v)

        return {"id": self.id, "passed": self.passed, "left": enc(self.left), "right": enc(self.right)}


def _edge_budget(g: Multigraph) -> None:
    if g.m > MAX_EDGES:
        raise BudgetExceeded(f"m={g.m} exceeds {MAX_EDGES}")


def _vertex_budget(g: Multigraph) -> None:
    if g.n > MAX_VERTICES:
        raise BudgetExceeded(f"n={g.n} exceeds {MAX_VERTICES}")


def _euler_from_b(g: Multigraph) -> MultiPoly:
    b = bipartition_polynomial(g)
    return derive(b, graph_stats(b), "euler")


def euler_forest_sum(g: Multigraph) -> tuple[MultiPoly, MultiPoly]:
    _edge_budget(g)
    n, m = g.n, g.m
    one_minus = ONE - Z
    one_plus = ONE + Z
    left = MultiPoly()
    for h in spanning_forests(g):
        k = h.k
        ext = external_activity(g, h)
        # (1+z)^(m-n)(-z)^n (-(1+z)/z)^k ((1-z)/(1+z))^ext, multiplied out
        term = one_plus ** (m - n + k - ext) * one_minus ** ext
        left = left + term.shift(0, 0, n - k) * (-1) ** (n + k)
    return left, _euler_from_b(g)


def euler_vertex_sum(g: Multigraph) -> tuple[MultiPoly, MultiPoly]:
    _vertex_budget(g)
    by_size: dict[int, int] = {}
    for w in range(1 << g.n):
        b = edge_boundary(g, w).bit_count()
        by_size[b] = by_size.get(b, 0) + 1
    total = MultiPoly()
    for b, c in by_size.items():
        total = total + (ONE - Z) ** b * (ONE + Z) ** (g.m - b) * c
    return total.scale_div(2 ** g.n), _euler_from_b(g)


def domination_count(g: Multigraph) -> tuple[Fraction, Fraction]:
    _vertex_budget(g)
    acc = Fraction(0)
    for w in range(1 << g.n):
        closed = w
        for v in range(g.n):
            if (w >> v) & 1:
                closed |= g.adjacency[v]
        acc += Fraction((-1) ** w.bit_count(), 2 ** closed.bit_count())
    left = 2 ** g.n * acc
    b = bipartition_polynomial(g)
    right = derive(b, graph_stats(b), "domination").evaluate((1, 0, 0))
    return left, right


def activity_sum(g: Multigraph) -> tuple[int, int]:
    _edge_budget(g)
    left = sum((-2) ** h.k for h in spanning_forests(g) if external_activity(g, h) == 0)
    right = (-1) ** g.n * bipartition_polynomial(g).evaluate((1, 1, -1))
    return left, int(right)


def bicolored_no_iso(g: Multigraph) -> tuple[int, int]:
    _edge_budget(g)
    left = 0
    for f in range(1 << g.m):
        parts = spanning_parts(g, f)
        if parts is None or any(t == 0 for _, t in parts):
            continue  # non-bipartite, or some vertex left isolated
        left += 2 ** len(parts)
    right = (-1) ** g.n * bipartition_polynomial(g).evaluate((-1, -1, 1))
    return left, int(right)


def planar_dual(g: Multigraph, dual: Multigraph) -> tuple[MultiPoly, MultiPoly]:
    """Euler polynomial of G against the cut polynomial of its (connected) dual."""
    bg = bipartition_polynomial(g)
    left = substitute_rational(bg, (1, 1, (-2 * Z, ONE + Z)), [(ONE + Z, g.m)], divisor=2 ** g.n)
    bd = bipartition_polynomial(dual)
    right = substitute_rational(bd, (1, 1, Z - 1), divisor=2)
    return left, right


def verify(g: Multigraph, id: str, dual: Optional[Multigraph] = None) -> IdentityReport:
    if id not in IDENTITIES:
        raise ValueError(f"unknown identity {id!r}")
    if id == "planar_dual":
        if dual is None:
            raise MissingDual("planar_dual needs the dual graph")
        left, right = planar_dual(g, dual)
    else:
        left, right = globals()[id](g)
    return IdentityReport(id, left, right, left == right)
