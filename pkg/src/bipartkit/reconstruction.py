"""Rebuilding B(G) from the multiset {B(G - e)} of its one-edge-deleted polynomials.

All coefficients of z^k with k < m follow from the deck sum by exact
division.  The top coefficient phi_G(E) needs the case analysis below:
nonbipartite graphs give 0, bipartite graphs with a cycle copy the type of
a deck member with fewest components, and forests go through the
type-deck argument in ``reconstruct_forest_type``.  Decks with at most
three edges are settled by exhaustive search instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Optional, Sequence, Union

from bipartkit.bipartition import bipartition_polynomial
from bipartkit.invariants import Inconsistent, PolyStats, graph_stats, predicates
from bipartkit.multigraph import (
    Multigraph,
    components,
    delete_edge,
    disjoint_union,
    empty_graph,
    path_graph,
    cycle_graph,
    star_graph,
)
from bipartkit.polyring import ONE, X, MultiPoly, NonClearing, NotAUnitProduct, divide_exact, factor_units

SMALL_DECK = 3


class ReconstructionError(ValueError):
    pass


class EmptyGraph(ReconstructionError):
    pass


class InexactDivision(ReconstructionError):
    pass


class MalformedPhi(ReconstructionError):
    pass


class ParityViolation(ReconstructionError):
    pass


class NoConsistentSequence(ReconstructionError):
    pass


class NotAForestDeck(ReconstructionError):
    pass


class InconsistentDeck(ReconstructionError):
    pass


# -- data types ------------------------------------------------------------

@dataclass(frozen=True)
class PolyDeck:
    members: tuple[MultiPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members, key=MultiPoly.sort_key)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def to_json_obj(self) -> list:
        return [p.to_json_obj() for p in self.members]

    @classmethod
    def from_json_obj(cls, obj: Sequence) -> "PolyDeck":
        return cls(tuple(MultiPoly.from_json_obj(p) for p in obj))


@dataclass(frozen=True, order=True)
class ForestType:
    """Sorted part-size differences of nontrivial components plus a star count."""

    entries: tuple[int, ...]
    stars: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries)))
        if self.stars < 0 or any(a < 0 for a in self.entries):
            raise ValueError("type entries and star count must be nonnegative")

    def replace(self, remove: Iterable[int], add: Iterable[int] = (), stars: int = 0) -> "ForestType":
        left = list(self.entries)
        for a in remove:
            left.remove(a)
        return ForestType(tuple(left) + tuple(add), self.stars + stars)

    def count(self, a: int) -> int:
        return self.entries.count(a)

    def __str__(self) -> str:
        parts = [str(a) for a in self.entries] + ["*"] * self.stars
        return "(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class Unique:
    b: MultiPoly


@dataclass(frozen=True)
class Ambiguous:
    """Several polynomials share the deck.  ``family`` names the matched
    exceptional line, or is None for a collision outside the known lines."""

    members: tuple[tuple[str, MultiPoly], ...]
    family: Optional[str] = None
    t: Optional[int] = None
    graphs: tuple[Multigraph, ...] = field(default=(), compare=False)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.members)


ReconstructionResult = Union[Unique, Ambiguous]


# -- deck basics -----------------------------------------------------------

def poly_deck(g: Multigraph, method: str = "auto") -> PolyDeck:
    if g.m == 0:
        raise EmptyGraph("a graph without edges has an empty deck")
    return PolyDeck(tuple(bipartition_polynomial(delete_edge(g, e), method) for e in range(g.m)))


def low_coefficients(deck: PolyDeck) -> MultiPoly:
    """All z^k terms of B(G) with k < m, recovered from the deck sum."""
    m = len(deck)
    if m == 0:
        raise EmptyGraph("empty deck")
    total = MultiPoly()
    for p in deck:
        total = total + p
    if total.degree("z") >= m:
        raise InexactDivision("deck member has too many edges")
    out = {}
    for (ex, ey, ez), c in total.items():
        q, r = divmod(c, m - ez)
        if r:
            raise InexactDivision(f"coefficient of z^{ez} not divisible by {m - ez}")
        out[(ex, ey, ez)] = q
    return MultiPoly(out)


# -- types and phi ---------------------------------------------------------

def top_coefficient(b: MultiPoly, m: int) -> MultiPoly:
    return b.coefficient("z", m)


def extract_type(b: MultiPoly, stats: Optional[PolyStats] = None) -> Optional[ForestType]:
    """Type of G read from [z^m]B; None when that coefficient vanishes (G nonbipartite)."""
    st = stats or graph_stats(b)
    top = top_coefficient(b, st.m)
    if top.is_zero():
        return None
    try:
        core = divide_exact(top, (ONE + X) ** st.iso)
    except NonClearing:
        raise MalformedPhi("top coefficient is not divisible by (1+x)^iso") from None
    at_y1 = core.subs(y=1)
    low = at_y1.min_degree("x")
    at_y1 = at_y1.shift(-low)
    zeros_value = at_y1.constant_term()
    if zeros_value <= 0 or zeros_value & (zeros_value - 1):
        raise MalformedPhi("value at x=0 is not a power of two")
    try:
        positive = factor_units(at_y1)
    except NotAUnitProduct as exc:
        raise MalformedPhi(str(exc)) from None
    t = ForestType(tuple([0] * (zeros_value.bit_length() - 1) + positive), st.iso)
    if phi_from_type(t, st.n) != top:
        raise MalformedPhi("top coefficient does not have the product shape of a type")
    return t


def phi_from_type(t: ForestType, n: int) -> MultiPoly:
    rest = n - t.stars - sum(t.entries)
    if rest < 0 or rest % 2:
        raise ParityViolation(f"type {t} does not fit {n} vertices")
    out = (ONE + X) ** t.stars * MultiPoly.monomial(rest // 2, rest // 2)
    for a in t.entries:
        out = out * (MultiPoly.monomial(a) + MultiPoly.monomial(0, a))
    return out


# -- degree sequence from the deck -----------------------------------------

def degseq_from_deck(deck: PolyDeck, member_stats: Optional[Sequence[PolyStats]] = None) -> tuple[int, ...]:
    """Degree sequence of G from the union of the deck members' degree sequences.

    Each vertex of degree d appears with degree d-1 in d members and with
    degree d in the other m-d, so count(j) = n_j (m-j) + n_{j+1} (j+1).
    The system is solved downward from j = m-1; n_m (whose coefficient
    vanishes) is searched over all possible values.
    """
    stats = list(member_stats) if member_stats is not None else [graph_stats(p) for p in deck]
    m = len(deck)
    if m == 0:
        raise EmptyGraph("empty deck")
    n = stats[0].n
    count = Counter()
    for st in stats:
        count.update(st.degseq)
    solutions = []
    for top in range(n + 1):
        nj = [0] * (m + 2)
        nj[m] = top
        ok = count.get(m, 0) == 0
        for j in range(m - 1, -1, -1):
            if not ok:
                break
            q, r = divmod(count.get(j, 0) - nj[j + 1] * (j + 1), m - j)
            if r or q < 0:
                ok = False
            nj[j] = q
        if ok and sum(nj) == n and sum(j * c for j, c in enumerate(nj)) == 2 * m:
            solutions.append(tuple(j for j, c in enumerate(nj) for _ in range(c)))
    if len(solutions) != 1:
        raise NoConsistentSequence(
            "no degree sequence fits the deck" if not solutions else "degree sequence is not unique"
        )
    return solutions[0]


# -- forest types from the type-deck ---------------------------------------

def reconstruct_forest_type(tdeck: Sequence[ForestType], degseq: Sequence[int]) -> ForestType:
    """Type of a forest F without isolated vertices from the types of all F - e.

    ``tdeck`` holds one type per edge, with stars counting only the
    vertices isolated by that deletion.  ``degseq`` is the degree sequence
    of F (no zeros).
    """
    m = len(tdeck)
    n = len(degseq)
    if m == 0 or any(d <= 0 for d in degseq):
        raise NotAForestDeck("need at least one edge and no isolated vertices")
    k = n - m
    if k < 1:
        raise NotAForestDeck("more edges than a forest on these vertices allows")
    sdeck = [t for t in tdeck if t.stars > 0]
    if not sdeck or any(t.stars > 2 for t in tdeck):
        raise NotAForestDeck("a forest always has leaf edges, and loses at most two vertices per edge")

    # a P2 component: its deletion leaves two stars
    for t in sdeck:
        if t.stars == 2:
            return ForestType(t.entries + (0,))

    least = min((a for t in sdeck for a in t.entries), default=None)
    if least is not None and least > 0 and (least != 1 or k > 1):
        # smallest component has type least+1 and produced (least, *)
        t = next(t for t in sdeck if least in t.entries)
        return t.replace([least], [least + 1], stars=-1)

    if any(t.count(0) >= 2 for t in sdeck):
        # some component has type (0); a card with fewest zeros came from one of its leaf edges
        fewest = min(sdeck, key=lambda t: t.count(0))
        return fewest.replace([1], [0], stars=-1)

    if k == 1:
        return _tree_case(tdeck, sdeck, degseq)
    if k == 2:
        return _two_components(tdeck, sdeck, degseq)
    return _many_components(sdeck)


def _tree_case(tdeck, sdeck, degseq) -> ForestType:
    values = sorted({t.entries[0] for t in sdeck})
    if len(values) == 2 and values[1] == values[0] + 2:
        return ForestType((values[0] + 1,))
    if len(values) != 1:
        raise NotAForestDeck(f"tree s-deck with values {values}")
    a = values[0]
    if a != 1:
        return ForestType((a + 1,))
    if ForestType((0, 2)) in tdeck or sorted(degseq) == [1, 1, 1, 3]:
        return ForestType((2,))
    return ForestType((0,))


def _two_components(tdeck, sdeck, degseq) -> ForestType:
    with_zero = sorted({t for t in sdeck if 0 in t.entries})
    if not with_zero:
        raise NotAForestDeck("two-component s-deck without a zero entry")
    others = sorted({t.entries[1] for t in with_zero})
    if len(others) == 2 and others[1] == others[0] + 2:
        return ForestType((0, others[0] + 1))
    if len(others) != 1:
        raise NotAForestDeck(f"two-component s-deck with zero-cards {with_zero}")
    a = others[0]
    if a >= 2:
        if ForestType((1, a - 1), 1) in sdeck:
            return ForestType((1, a))
        return ForestType((0, a + 1))
    # a == 1: candidates (0,0), (1,1), (0,2)
    if ForestType((0, 0, 2)) in tdeck:
        return ForestType((0, 2))
    zero_one = sum(1 for t in sdeck if t == ForestType((0, 1), 1))
    if zero_one == 3:
        return ForestType((0, 2))
    if any(t != ForestType((0, 1), 1) for t in sdeck):
        return ForestType((1, 1))
    for t in tdeck:
        if t.stars == 0 and 0 in t.entries:
            rest = t.replace([0])
            if len(set(rest.entries)) == 1 and rest.entries[0] != 1:
                return ForestType((0, 0))
    return ForestType((1, 1)) if 2 in degseq else ForestType((0, 0))


def _many_components(sdeck) -> ForestType:
    zero_cards = sorted({t for t in sdeck if 0 in t.entries})
    if not zero_cards:
        raise NotAForestDeck("s-deck has no card with a zero entry")
    if len(zero_cards) >= 2:
        # F has a (0) component; its leaf edges give the only zero-free cards
        free = [t for t in sdeck if 0 not in t.entries]
        if not free:
            raise NotAForestDeck("expected a zero-free card")
        return free[0].replace([1], [0], stars=-1)
    rest = zero_cards[0].replace([0], stars=-1)
    entries = rest.entries
    a = entries[-1]
    if a >= 2 and entries[0] == a - 1 and all(e == a for e in entries[1:]):
        witness = ForestType((1, a - 1, a - 1) + (a,) * (len(entries) - 2), 1)
        if witness not in sdeck:
            return ForestType((0,) + (a,) * len(entries))
    return ForestType((1,) + entries)


# -- naming small graphs ---------------------------------------------------

def _component_name(g: Multigraph) -> str:
    degs = [g.degree(v) for v in range(g.n)]
    if g.m == g.n - 1 and max(degs) <= 2:
        return f"P{g.n}"
    if g.m == g.n and all(d == 2 for d in degs):
        return f"C{g.n}"
    if g.m == g.n - 1 and g.n >= 4 and sorted(degs) == [1] * (g.n - 1) + [g.n - 1]:
        return f"K1,{g.n - 1}"
    return f"H{g.n}" + "".join(f"[{u}{v}]" for u, v in sorted(g.edges))


def describe(g: Multigraph) -> str:
    """Readable name such as ``C3+P1``, ``2P2`` or ``K1,3+2P1``."""
    names = Counter()
    iso = 0
    for comp in components(g):
        if comp & (comp - 1) == 0:
            iso += 1
        else:
            names[_component_name(g.induced(comp))] += 1
    parts = [(f"{c}{name}" if c > 1 else name) for name, c in sorted(names.items())]
    if iso:
        parts.append(f"{iso}P1" if iso > 1 else "P1")
    return "+".join(parts) if parts else "K0"


def family_graphs(line: int, t: int) -> list[Multigraph]:
    """Members of an exceptional family line at parameter t (line 1 or 2)."""
    if line == 1:
        return [
            disjoint_union(cycle_graph(2), empty_graph(t + 2)),
            disjoint_union(path_graph(3), empty_graph(t + 1)),
            disjoint_union(path_graph(2), path_graph(2), empty_graph(t)),
        ]
    if line == 2:
        return [
            disjoint_union(cycle_graph(3), empty_graph(t + 1)),
            disjoint_union(star_graph(3), empty_graph(t)),
        ]
    raise ValueError("family lines are 1 and 2")


FAMILY_LABELS = {
    1: "C2+(t+2)P1 | P3+(t+1)P1 | 2P2+tP1",
    2: "C3+(t+1)P1 | K1,3+tP1",
}


def _classify(names: set[str], n: int, m: int) -> tuple[Optional[str], Optional[int]]:
    line = {2: 1, 3: 2}.get(m)
    t = n - 4
    if line is None or t < 0:
        return None, None
    expected = {describe(g) for g in family_graphs(line, t)}
    if names <= expected and len(names) >= 2:
        return FAMILY_LABELS[line], t
    return None, None


# -- small decks by exhaustive search --------------------------------------

def _deck_key(deck: Iterable[MultiPoly]) -> tuple:
    return tuple(sorted((p.to_json() for p in deck)))


@lru_cache(maxsize=None)
def _small_table(n: int, m: int) -> dict[tuple, tuple[Multigraph, ...]]:
    """Every multigraph with m edges on n vertices (up to padding), keyed by deck."""
    v = min(n, 2 * m)
    pairs = list(combinations(range(v), 2))
    table: dict[tuple, list[Multigraph]] = {}
    for edges in combinations_with_replacement(pairs, m):
        g = Multigraph(n, edges)
        key = _deck_key(poly_deck(g).members)
        table.setdefault(key, []).append(g)
    return {k: tuple(gs) for k, gs in table.items()}


def _reconstruct_small(deck: PolyDeck, n: int) -> ReconstructionResult:
    m = len(deck)
    matches = _small_table(n, m).get(_deck_key(deck.members))
    if not matches:
        raise InconsistentDeck("no multigraph has this deck")
    by_poly: dict[MultiPoly, Multigraph] = {}
    for g in matches:
        by_poly.setdefault(bipartition_polynomial(g), g)
    if len(by_poly) == 1:
        return Unique(next(iter(by_poly)))
    members = sorted(((describe(g), b) for b, g in by_poly.items()), key=lambda nb: nb[0])
    family, t = _classify({name for name, _ in members}, n, m)
    return Ambiguous(tuple(members), family, t, tuple(by_poly.values()))


# -- main entry ------------------------------------------------------------

def _check_deck(deck: PolyDeck) -> list[PolyStats]:
    if len(deck) == 0:
        raise EmptyGraph("empty deck")
    try:
        stats = [graph_stats(p) for p in deck]
    except Inconsistent as exc:
        raise InconsistentDeck(f"deck member is not a bipartition polynomial: {exc}") from None
    m = len(deck)
    if len({st.n for st in stats}) != 1 or any(st.m != m - 1 for st in stats):
        raise InconsistentDeck("deck members disagree on order or size")
    return stats


def _is_cycle_pattern(stats: Sequence[PolyStats], preds: Sequence[dict], m: int, iso: int) -> bool:
    """Every member is P_m plus the same isolated vertices as G: G is C_m plus those."""
    for st, pr in zip(stats, preds):
        nontrivial = [c for c in st.comp_orders if c > 1]
        if not (pr["forest"] and st.iso == iso and nontrivial == [m] and st.max_degree <= 2):
            return False
    return True


def reconstruct(deck: Union[PolyDeck, Sequence[MultiPoly]]) -> ReconstructionResult:
    if not isinstance(deck, PolyDeck):
        deck = PolyDeck(tuple(deck))
    stats = _check_deck(deck)
    m = len(deck)
    n = stats[0].n
    if m <= SMALL_DECK:
        return _reconstruct_small(deck, n)

    low = low_coefficients(deck)
    degseq = degseq_from_deck(deck, stats)
    iso = degseq.count(0)
    preds = [predicates(p, st) for p, st in zip(deck, stats)]
    cycle = _is_cycle_pattern(stats, preds, m, iso)

    if any(not pr["bipartite"] for pr in preds) or (cycle and m % 2):
        top = MultiPoly()
    elif cycle or any(not pr["forest"] for pr in preds):
        j = min(range(m), key=lambda i: stats[i].k)
        t = extract_type(deck.members[j], stats[j])
        top = phi_from_type(t, n)
    else:
        tdeck = []
        for p, st in zip(deck, stats):
            t = extract_type(p, st)
            if t is None or t.stars < iso:
                raise InconsistentDeck("forest deck member with unexpected type")
            tdeck.append(ForestType(t.entries, t.stars - iso))
        ftype = reconstruct_forest_type(tdeck, [d for d in degseq if d > 0])
        top = phi_from_type(ForestType(ftype.entries, iso), n)
    return Unique(low + top.shift(0, 0, m))
