import random
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipartkit.bipartition import bipartition_polynomial
from bipartkit.invariants import PolyStats
from bipartkit.multigraph import (
    Multigraph,
    all_labeled_simple_graphs,
    bipartition_parts,
    cycle_graph,
    degree_sequence,
    delete_edge,
    disjoint_union,
    empty_graph,
    enumerate_trees,
    path_graph,
    random_multigraph,
    star_graph,
)
from bipartkit.polyring import ONE, X, Y, Z, MultiPoly
from bipartkit.reconstruction import (
    FAMILY_LABELS,
    Ambiguous,
    EmptyGraph,
    ForestType,
    InconsistentDeck,
    InexactDivision,
    MalformedPhi,
    NoConsistentSequence,
    NotAForestDeck,
    ParityViolation,
    PolyDeck,
    Unique,
    degseq_from_deck,
    describe,
    extract_type,
    family_graphs,
    low_coefficients,
    phi_from_type,
    poly_deck,
    reconstruct,
    reconstruct_forest_type,
)

import suites

P2, P3, P4 = path_graph(2), path_graph(3), path_graph(4)
C3, C4 = cycle_graph(3), cycle_graph(4)
K13 = star_graph(3)


def B(g):
    return suites.poly(g)


def deck_of(*graphs):
    return PolyDeck(tuple(B(g) for g in graphs))


def graph_type(g):
    """Type of a bipartite graph read off its colouring."""
    parts = bipartition_parts(g)
    entries, stars = [], 0
    for s, t in parts:
        if t == 0:
            stars += 1
        else:
            entries.append(abs(s.bit_count() - t.bit_count()))
    return ForestType(tuple(entries), stars)


def type_deck(g):
    return [graph_type(delete_edge(g, e)) for e in range(g.m)]


def in_family(g, include_small=True):
    """Is g a member of an exceptional line?  ``include_small`` adds the t = -1 pair P3 / C2+P1."""
    t = g.n - 4
    line = {2: 1, 3: 2}.get(g.m)
    if line is None:
        return False
    if t >= 0:
        return describe(g) in {describe(h) for h in family_graphs(line, t)}
    return include_small and line == 1 and t == -1 and describe(g) in {"P3", "C2+P1"}


def check_result(g, result, include_small=True):
    if in_family(g, include_small):
        assert isinstance(result, Ambiguous), g
        assert describe(g) in result.names
        assert B(g) in [b for _, b in result.members]
    else:
        assert result == Unique(B(g)), g


# -- decks and low coefficients --------------------------------------------------

def test_deck_examples():
    p3p1 = disjoint_union(P3, empty_graph(1))
    two_p2 = disjoint_union(P2, P2)
    assert poly_deck(P4) == deck_of(p3p1, two_p2, p3p1)
    assert poly_deck(P2).members == ((ONE + X) ** 2,)
    c3p1 = disjoint_union(C3, empty_graph(1))
    assert poly_deck(c3p1) == poly_deck(K13)
    assert B(c3p1) != B(K13)


def test_deck_is_a_multiset():
    g = random_multigraph(random.Random(1), 6, 9)
    assert poly_deck(g) == poly_deck(g.with_edge_order(list(reversed(range(g.m)))))


def test_low_coefficient_examples():
    assert low_coefficients(poly_deck(P2)) == ONE + 2 * X + X ** 2
    assert low_coefficients(poly_deck(P3)) == ONE + 3 * X + 3 * X ** 2 + X ** 3 + 4 * X * Y * Z + 4 * X * X * Y * Z
    b = B(P4)
    assert low_coefficients(poly_deck(P4)) == b - b.coefficient("z", 3).shift(0, 0, 3)


def test_low_coefficients_match_everywhere():
    for g in suites.small_mixed():
        if g.m:
            b = B(g)
            assert low_coefficients(poly_deck(g)) == b - b.coefficient("z", g.m).shift(0, 0, g.m)


# -- types ------------------------------------------------------------------------

def test_extract_type_examples():
    assert extract_type(B(P2)) == ForestType((0,))
    assert extract_type(B(P3)) == ForestType((1,))
    assert extract_type(B(C3)) is None


def test_phi_from_type_examples():
    assert phi_from_type(ForestType((0,)), 2) == 2 * X * Y
    assert phi_from_type(ForestType((1,), 1), 4) == (ONE + X) * X * Y * (X + Y)
    assert phi_from_type(ForestType((0, 0)), 4) == 4 * X * X * Y * Y
    with pytest.raises(ParityViolation):
        phi_from_type(ForestType((1,)), 2)


def test_extract_type_matches_colouring():
    for g in suites.small_mixed():
        b = B(g)
        t = extract_type(b)
        if bipartition_parts(g) is None:
            assert t is None
        else:
            assert t == graph_type(g)


def test_malformed_phi():
    stats = PolyStats(3, 0, 1, 0, (3,), (0, 0, 0))
    with pytest.raises(MalformedPhi):
        extract_type(3 * X * Y, stats)


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 6), max_size=5), st.integers(0, 4), st.integers(0, 4))
def test_extract_inverts_phi_from_type(entries, stars, pairs):
    t = ForestType(tuple(entries), stars)
    n = stars + sum(entries) + 2 * pairs
    if n > 20:
        return
    stats = PolyStats(n, 0, 0, stars, (), ())
    assert extract_type(phi_from_type(t, n), stats) == t


# -- degree sequences ------------------------------------------------------------

def test_degseq_examples():
    assert degseq_from_deck(poly_deck(P4)) == (1, 1, 2, 2)
    assert degseq_from_deck(poly_deck(C4)) == (2, 2, 2, 2)
    assert degseq_from_deck(poly_deck(star_graph(4))) == (1, 1, 1, 1, 4)


def test_degseq_from_deck_matches():
    for g in suites.random_simple() + suites.random_multi():
        if g.m >= 4:
            assert degseq_from_deck(poly_deck(g)) == tuple(degree_sequence(g))


def test_degseq_without_solution():
    with pytest.raises(NoConsistentSequence):
        degseq_from_deck(PolyDeck((B(K13),) * 4))


# -- forest types from type decks --------------------------------------------------

def test_forest_type_examples():
    p5 = path_graph(5)
    assert reconstruct_forest_type(type_deck(p5), degree_sequence(p5)) == ForestType((1,))
    # the same answer from the deck as sometimes written, with (1,1) for the inner cards
    listed = [ForestType((0,), 1), ForestType((1, 1)), ForestType((1, 1)), ForestType((0,), 1)]
    assert reconstruct_forest_type(listed, [1, 1, 2, 2, 2]) == ForestType((1,))
    spider = Multigraph(5, ((0, 1), (0, 2), (0, 3), (3, 4)))
    assert reconstruct_forest_type(type_deck(spider), [1, 1, 1, 2, 3]) == ForestType((1,))
    p4p2 = disjoint_union(P4, P2)
    assert reconstruct_forest_type(type_deck(p4p2), [1, 1, 1, 1, 2, 2]) == ForestType((0, 0))


def test_forest_type_rejects_junk():
    with pytest.raises(NotAForestDeck):
        reconstruct_forest_type([], [])
    with pytest.raises(NotAForestDeck):
        reconstruct_forest_type([ForestType((1,))] * 4, [1, 1, 2, 2, 2])


def forests_without_isolated_vertices(max_n):
    trees = {k: list(enumerate_trees(k)) for k in range(2, max_n + 1)}
    pool = [t for k in range(2, max_n + 1) for t in trees[k]]

    def rec(start, budget, chosen):
        if chosen:
            yield disjoint_union(*chosen)
        for i in range(start, len(pool)):
            if pool[i].n <= budget:
                yield from rec(i, budget - pool[i].n, chosen + [pool[i]])

    yield from rec(0, max_n, [])


def test_forest_type_recovery_exhaustive():
    """Every forest with >= 4 edges, <= 14 vertices and no isolated vertex gets its own type back,
    and forests sharing a type deck and degree sequence always share a type."""
    seen = {}
    count = 0
    for f in forests_without_isolated_vertices(14):
        if f.m < 4:
            continue
        tdeck = type_deck(f)
        degseq = degree_sequence(f)
        truth = graph_type(f)
        assert reconstruct_forest_type(tdeck, degseq) == truth, f
        key = (tuple(sorted(tdeck)), tuple(degseq))
        assert seen.setdefault(key, truth) == truth
        count += 1
    assert count == 8591


def _leaf_edges(t):
    return [e for e, (u, v) in enumerate(t.edges) if t.degree(u) == 1 or t.degree(v) == 1]


def _trees_up_to(n):
    for k in range(2, n + 1):
        yield from enumerate_trees(k)


def test_trees_have_two_descending_leaf_edges():
    for t in _trees_up_to(10):
        a = graph_type(t).entries[0]
        if a >= 1:
            hits = [e for e in range(t.m) if graph_type(delete_edge(t, e)) == ForestType((a - 1,), 1)]
            assert len(hits) >= 2, t


def test_balanced_trees_with_split_inner_edges_have_odd_degrees():
    for t in _trees_up_to(10):
        if graph_type(t) != ForestType((0,)):
            continue
        inner = [e for e in range(t.m) if e not in _leaf_edges(t)]
        if all(graph_type(delete_edge(t, e)) == ForestType((1, 1)) for e in inner):
            assert all(t.degree(v) % 2 == 1 for v in range(t.n)), t


def test_type_two_trees_with_uniform_leaf_cards():
    for t in _trees_up_to(10):
        if graph_type(t) != ForestType((2,)):
            continue
        if all(graph_type(delete_edge(t, e)) == ForestType((1,), 1) for e in _leaf_edges(t)):
            has_split = any(graph_type(delete_edge(t, e)) == ForestType((0, 2)) for e in range(t.m))
            assert degree_sequence(t) == [1, 1, 1, 3] or has_split, t


# -- full reconstruction ----------------------------------------------------------

def test_reconstruct_examples():
    b = B(P4)
    assert reconstruct(poly_deck(P4)) == Unique(b)
    assert b.coefficient("z", 3) == 2 * X * X * Y * Y
    res = reconstruct(poly_deck(disjoint_union(C3, empty_graph(1))))
    assert isinstance(res, Ambiguous)
    assert set(res.names) == {"C3+P1", "K1,3"} and res.t == 0 and res.family == FAMILY_LABELS[2]
    res = reconstruct(poly_deck(disjoint_union(P2, P2)))
    assert set(res.names) == {"C2+2P1", "P3+P1", "2P2"} and res.family == FAMILY_LABELS[1]
    assert reconstruct(poly_deck(C4)) == Unique(B(C4))


def test_reconstruct_accepts_plain_lists():
    assert reconstruct(list(poly_deck(C4))) == Unique(B(C4))


def test_reconstruct_errors():
    with pytest.raises(EmptyGraph):
        poly_deck(empty_graph(3))
    with pytest.raises(EmptyGraph):
        reconstruct([])
    with pytest.raises(InconsistentDeck):
        reconstruct([B(P2), B(P3)])
    with pytest.raises(InconsistentDeck):
        reconstruct([ONE + 2 * X])
    with pytest.raises(InexactDivision):
        low_coefficients(PolyDeck((B(P3), B(P3))))
    with pytest.raises(NoConsistentSequence):
        reconstruct(PolyDeck((B(K13),) * 4))


def test_small_pair_outside_the_listed_lines():
    """P3 and C2+P1 on three vertices share a deck but not a polynomial."""
    c2p1 = disjoint_union(cycle_graph(2), empty_graph(1))
    assert poly_deck(P3) == poly_deck(c2p1)
    assert B(P3) != B(c2p1)
    res = reconstruct(poly_deck(P3))
    assert isinstance(res, Ambiguous) and set(res.names) == {"P3", "C2+P1"}
    assert res.family is None


@pytest.mark.parametrize("t", range(4))
@pytest.mark.parametrize("line", (1, 2))
def test_exceptional_families(line, t):
    members = family_graphs(line, t)
    decks = {poly_deck(g) for g in members}
    assert len(decks) == 1
    polys = [B(g) for g in members]
    assert len(set(polys)) == len(polys)
    res = reconstruct(decks.pop())
    assert isinstance(res, Ambiguous)
    assert res.family == FAMILY_LABELS[line] and res.t == t
    assert set(res.names) == {describe(g) for g in members}


def test_describe():
    assert describe(disjoint_union(C3, empty_graph(1))) == "C3+P1"
    assert describe(disjoint_union(P2, P2)) == "2P2"
    assert describe(K13) == "K1,3"
    assert describe(disjoint_union(cycle_graph(2), empty_graph(2))) == "C2+2P1"
    assert describe(empty_graph(0)) == "K0"


def test_round_trip_all_labeled_graphs_to_six_vertices():
    memo = {}

    def poly_of(g):
        key = (g.n, tuple(sorted(g.edges)))
        if key not in memo:
            memo[key] = bipartition_polynomial(g)
        return memo[key]

    by_deck = {}
    for n in range(1, 7):
        for g in all_labeled_simple_graphs(n):
            if g.m == 0:
                continue
            deck = PolyDeck(tuple(poly_of(delete_edge(g, e)) for e in range(g.m)))
            by_deck.setdefault(deck, []).append(g)
    for deck, graphs in by_deck.items():
        result = reconstruct(deck)
        for g in graphs:
            if in_family(g):
                assert isinstance(result, Ambiguous) and describe(g) in result.names
                assert poly_of(g) in [b for _, b in result.members]
            else:
                assert result == Unique(poly_of(g)), g


def test_round_trip_random_multigraphs():
    rng = random.Random(99)
    for _ in range(200):
        g = random_multigraph(rng, rng.randint(2, 7), 12)
        if g.m:
            check_result(g, reconstruct(poly_deck(g)))


def test_small_decks_found_by_search():
    """Every multigraph with at most three edges on at most six vertices."""
    for n in range(2, 7):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for m in range(1, 4):
            for edges in combinations_with_replacement(pairs, m):
                g = Multigraph(n, edges)
                check_result(g, reconstruct(poly_deck(g)))
