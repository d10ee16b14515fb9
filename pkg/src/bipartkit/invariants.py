"""Graph facts read off a bipartition polynomial, with no graph at hand."""

from __future__ import annotations

from dataclasses import dataclass

from bipartkit.polyring import MultiPoly, NotAUnitProduct, factor_units, shift_var


class Inconsistent(ValueError):
    """The polynomial fails a cross-check that every bipartition polynomial passes."""


@dataclass(frozen=True)
class PolyStats:
    n: int
    m: int
    k: int
    iso: int
    comp_orders: tuple[int, ...]
    degseq: tuple[int, ...]

    @property
    def max_degree(self) -> int:
        return max(self.degseq, default=0)


def degree_counts(b: MultiPoly) -> MultiPoly:
    """x-linear part of B(x, 1, t-1) with t in the z slot: sum over v of z^deg(v)."""
    return shift_var(b.subs(y=1), "z", -1).coefficient("x", 1)


def graph_stats(b: MultiPoly) -> PolyStats:
    if b.is_zero() or b.constant_term() != 1 or b.min_degree("x") < 0:
        raise Inconsistent("constant term must be 1 and exponents nonnegative")
    n = b.degree("x")
    xyz = b[(1, 1, 1)]
    if xyz % 2:
        raise Inconsistent("odd coefficient of xyz")
    m = xyz // 2

    try:
        comp_orders = tuple(factor_units(b.subs(y=1, z=-1)))
    except NotAUnitProduct as exc:
        raise Inconsistent(f"B(x,1,-1) is not a product of (1+x^k): {exc}") from None
    k = len(comp_orders)
    if b.evaluate((1, 1, -1)) != 2 ** k:
        raise Inconsistent("B(1,1,-1) disagrees with the component count")
    if sum(comp_orders) != n:
        raise Inconsistent("component orders do not sum to n")

    degseq: list[int] = []
    for (_, _, d), c in degree_counts(b).items():
        if c < 0:
            raise Inconsistent("negative degree multiplicity")
        degseq.extend([d] * c)
    degseq.sort()
    if len(degseq) != n or sum(degseq) != 2 * m:
        raise Inconsistent("degree sequence disagrees with n or m")
    return PolyStats(n, m, k, comp_orders.count(1), comp_orders, tuple(degseq))


def predicates(b: MultiPoly, stats: PolyStats | None = None) -> dict[str, bool]:
    st = stats or graph_stats(b)
    bipartite = b.degree("z") == st.m
    cut = shift_var(b.subs(x=1, y=1), "z", -1).scale_div(2 ** st.k)
    forest = cut == shift_var(MultiPoly.monomial(0, 0, st.n - st.k), "z", 1)
    connected = st.k == 1
    return {
        "bipartite": bipartite,
        "forest": forest,
        "connected": connected,
        "path": forest and connected and st.max_degree <= 2,
    }
