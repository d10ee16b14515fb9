"""Classical graph polynomials obtained from B by exact substitution.

Output variables reuse the x, y, z slots:

* one-variable polynomials in t (degree_gen, matching, independence_regular)
  put t in the x slot; domination uses x as well;
* cut and euler are in z;
* ising, generalized_domination and van_der_waerden use (x, y);
* generalized_cut and bicolored use (x, z).
"""

from __future__ import annotations

from bipartkit.invariants import PolyStats
from bipartkit.polyring import ONE, X, Y, Z, MultiPoly, substitute_rational

TARGETS = (
    "domination",
    "generalized_domination",
    "ising",
    "cut",
    "generalized_cut",
    "degree_gen",
    "euler",
    "van_der_waerden",
    "matching",
    "independence_regular",
    "bicolored",
)

OUTPUT_VARS = {
    "domination": ("x",),
    "generalized_domination": ("x", "y"),
    "ising": ("x", "y"),
    "cut": ("z",),
    "generalized_cut": ("x", "z"),
    "degree_gen": ("t",),
    "euler": ("z",),
    "van_der_waerden": ("x", "y"),
    "matching": ("t",),
    "independence_regular": ("t",),
    "bicolored": ("x", "z"),
}


class NotRegular(ValueError):
    pass


class ResidualNegativePowers(ArithmeticError):
    """A limit was requested but negative powers of the auxiliary variable survive."""


def _z_to_x(p: MultiPoly) -> MultiPoly:
    return MultiPoly({(ez, 0, 0): c for (_, _, ez), c in p.items()})


def domination(b, st):
    return substitute_rational(b, ((-1, ONE + X), (X, ONE + X), -1), [(ONE + X, st.n)])


def generalized_domination(b, st):
    return substitute_rational(b, (X, ONE - Y, -1))


def ising(b, st):
    return substitute_rational(b, ((1, X), 1, (ONE - Y, Y)), [(X, st.n), (Y, st.m)])


def cut(b, st):
    return substitute_rational(b, (1, 1, Z - 1), divisor=2 ** st.k)


def generalized_cut(b, st):
    return substitute_rational(b, (X, 1, Z - 1))


def degree_gen(b, st):
    return _z_to_x(generalized_cut(b, st).coefficient("x", 1))


def euler(b, st):
    return substitute_rational(b, (1, 1, (-2 * Z, ONE + Z)), [(ONE + Z, st.m)], divisor=2 ** st.n)


def van_der_waerden(b, st):
    return substitute_rational(
        b,
        ((ONE - X, ONE + X), 1, (-2 * Y, ONE + Y)),
        [(ONE + X, st.n), (ONE + Y, st.m)],
        divisor=2 ** st.n,
    )


def matching(b, st):
    # a subgraph with j edges and 2j odd vertices is a matching
    w = van_der_waerden(b, st)
    return MultiPoly({(ey, 0, 0): c for (ex, ey, _), c in w.items() if ex == 2 * ey})


def independence_regular(b, st, r=None):
    degrees = set(st.degseq)
    if len(degrees) > 1:
        raise NotRegular(f"degree sequence {st.degseq} is not constant")
    actual = degrees.pop() if degrees else 0
    if r is None:
        r = actual
    elif r != actual:
        raise NotRegular(f"graph is {actual}-regular, not {r}-regular")
    # t in the x slot, the vanishing auxiliary variable in the y slot
    lp = substitute_rational(b, (MultiPoly.monomial(1, r), 1, (ONE - Y, Y)))
    if lp.min_degree("y") < 0:
        raise ResidualNegativePowers("limit does not exist: negative powers remain")
    return lp.coefficient("y", 0)


def bicolored(b, st):
    unit = (1, 2 * X - 1)
    return substitute_rational(b, (unit, unit, Z), [(2 * X - 1, st.n)])


_DISPATCH = {name: globals()[name] for name in TARGETS}


def derive(b: MultiPoly, stats: PolyStats, target: str, r: int | None = None) -> MultiPoly:
    if target not in _DISPATCH:
        raise ValueError(f"unknown target {target!r}")
    if target == "independence_regular":
        return independence_regular(b, stats, r)
    return _DISPATCH[target](b, stats)
