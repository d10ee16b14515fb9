"""Sparse Laurent polynomials in x, y, z with exact integer coefficients.

Exponent triples may be negative.  Every operation returns a new value; a
``MultiPoly`` is never mutated after construction.
"""

from __future__ import annotations

import heapq
import json
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

VARS = ("x", "y", "z")

Exp = tuple[int, int, int]
Number = Union[int, Fraction]


class NonClearing(ArithmeticError):
    """A rational substitution did not produce a polynomial."""


class NotAUnitProduct(ValueError):
    """Input is not c * prod(1 + x**k)."""


class PoleError(ZeroDivisionError):
    """Negative exponent evaluated at a zero coordinate."""


def _var_index(var: Union[str, int]) -> int:
    if isinstance(var, int):
        if var not in (0, 1, 2):
            raise ValueError(f"variable index out of range: {var}")
        return var
    try:
        return VARS.index(var)
    except ValueError:
        raise ValueError(f"unknown variable {var!r}") from None


class MultiPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping[Exp, int], Iterable[tuple[Exp, int]], None] = None):
        acc: dict[Exp, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for e, c in items:
                if c:
                    key = (int(e[0]), int(e[1]), int(e[2]))
                    acc[key] = acc.get(key, 0) + int(c)
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exp, int]) -> "MultiPoly":
        # trusted constructor: caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls._raw({(0, 0, 0): int(c)} if c else {})

    @classmethod
    def monomial(cls, ex: int = 0, ey: int = 0, ez: int = 0, c: int = 1) -> "MultiPoly":
        return cls._raw({(ex, ey, ez): int(c)} if c else {})

    @classmethod
    def var(cls, name: Union[str, int]) -> "MultiPoly":
        e = [0, 0, 0]
        e[_var_index(name)] = 1
        return cls._raw({tuple(e): 1})

    # -- container protocol -------------------------------------------------
    @property
    def terms(self) -> dict[Exp, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __getitem__(self, e: Exp) -> int:
        return self._terms.get(tuple(e), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sort_key(self) -> tuple:
        return tuple(sorted(self._terms.items()))

    # -- ring operations ----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            if other == 0:
                return MultiPoly()
            return MultiPoly._raw({e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Exp, int] = {}
        get = out.get
        for (bx, by, bz), bc in b.items():
            for (ax, ay, az), ac in a.items():
                k = (ax + bx, ay + by, az + bz)
                out[k] = get(k, 0) + ac * bc
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_div(self, d: int) -> "MultiPoly":
        """Divide every coefficient by the integer ``d``, exactly."""
        out = {}
        for e, c in self._terms.items():
            q, r = divmod(c, d)
            if r:
                raise NonClearing(f"coefficient {c} not divisible by {d}")
            out[e] = q
        return MultiPoly._raw(out)

    def shift(self, ex: int = 0, ey: int = 0, ez: int = 0) -> "MultiPoly":
        """Multiply by the monomial x**ex y**ey z**ez."""
        return MultiPoly._raw({(a + ex, b + ey, c + ez): v for (a, b, c), v in self._terms.items()})

    # -- inspection ---------------------------------------------------------
    def degree(self, var: Union[str, int]) -> int:
        i = _var_index(var)
        if not self._terms:
            return -1
        return max(e[i] for e in self._terms)

    def min_degree(self, var: Union[str, int]) -> int:
        i = _var_index(var)
        if not self._terms:
            return 0
        return min(e[i] for e in self._terms)

    def variables(self) -> set[str]:
        return {VARS[i] for e in self._terms for i in range(3) if e[i]}

    def is_univariate_in(self, var: Union[str, int]) -> bool:
        i = _var_index(var)
        return all(e[j] == 0 for e in self._terms for j in range(3) if j != i)

    def constant_term(self) -> int:
        return self._terms.get((0, 0, 0), 0)

    def coefficient(self, var: Union[str, int], k: int) -> "MultiPoly":
        i = _var_index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i] == k:
                f = list(e)
                f[i] = 0
                out[tuple(f)] = c
        return MultiPoly._raw(out)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading(self) -> tuple[Exp, int]:
        e = max(self._terms)
        return e, self._terms[e]

    # -- substitution / evaluation -----------------------------------------
    def subs(self, **values: int) -> "MultiPoly":
        """Replace variables by integer constants (result keeps the others)."""
        idx = {_var_index(k): int(v) for k, v in values.items()}
        for i, v in idx.items():
            if v == 0 and any(e[i] < 0 for e in self._terms):
                raise PoleError(f"negative power of {VARS[i]} at 0")
        out: dict[Exp, int] = {}
        for e, c in self._terms.items():
            f = list(e)
            for i, v in idx.items():
                p = e[i]
                if p >= 0:
                    c = c * v ** p
                elif v in (1, -1):
                    c = c * v ** (-p)
                else:
                    raise NonClearing(f"{VARS[i]}={v} at negative exponent is not integral")
                f[i] = 0
            if c:
                k = tuple(f)
                out[k] = out.get(k, 0) + c
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    def evaluate(self, point: Sequence[Number]) -> Fraction:
        total = Fraction(0)
        pts = [Fraction(p) for p in point]
        for e, c in self._terms.items():
            v = Fraction(c)
            for i in range(3):
                if e[i] < 0 and pts[i] == 0:
                    raise PoleError(f"negative power of {VARS[i]} at 0")
                if e[i]:
                    v *= pts[i] ** e[i]
            total += v
        return total

    # -- serialization ------------------------------------------------------
    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {"x": e[0], "y": e[1], "z": e[2], "c": str(c)}
                for e, c in sorted(self._terms.items())
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "MultiPoly":
        try:
            terms = obj["terms"]
            return cls(((t["x"], t["y"], t["z"]), int(t["c"])) for t in terms)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed polynomial object: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        return cls.from_json_obj(json.loads(text))

    def pretty(self, names: Sequence[str] = VARS) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            mono = []
            for name, p in zip(names, e):
                if p == 1:
                    mono.append(name)
                elif p:
                    mono.append(f"{name}^{p}")
            body = "*".join(mono)
            if not body:
                s = str(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{abs(c)}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.pretty()})"

    __str__ = pretty


ZERO = MultiPoly()
ONE = MultiPoly.const(1)
X = MultiPoly.var("x")
Y = MultiPoly.var("y")
Z = MultiPoly.var("z")


def ring_ops(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring op {op!r}")


def coefficient(p: MultiPoly, var: Union[str, int], k: int) -> MultiPoly:
    return p.coefficient(var, k)


def evaluate(p: MultiPoly, point: Sequence[Number]) -> Fraction:
    return p.evaluate(point)


def divide_exact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Return q with a == b*q, or raise NonClearing.

    Long division on lex-leading terms.  Quotient exponents are bounded
    below by min_v(a) - min_v(b) per variable, which also makes the Laurent
    case terminate.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    if len(b) == 1:
        (eb, cb), = b.items()
        out = {}
        for e, c in a.items():
            q, r = divmod(c, cb)
            if r:
                raise NonClearing(f"coefficient {c} not divisible by {cb}")
            out[(e[0] - eb[0], e[1] - eb[1], e[2] - eb[2])] = q
        return MultiPoly._raw(out)

    lo = [a.min_degree(i) - b.min_degree(i) for i in range(3)]
    hi = [a.degree(i) - b.degree(i) for i in range(3)]
    lead_b, lead_c = b.leading()
    rest_b = [(e, c) for e, c in b.items() if e != lead_b]

    rem = dict(a.items())
    heap = [tuple(-v for v in e) for e in rem]
    heapq.heapify(heap)
    quot: dict[Exp, int] = {}
    while rem:
        neg = heapq.heappop(heap)
        e = (-neg[0], -neg[1], -neg[2])
        c = rem.get(e)
        if c is None:
            continue
        qe = (e[0] - lead_b[0], e[1] - lead_b[1], e[2] - lead_b[2])
        if any(qe[i] < lo[i] or qe[i] > hi[i] for i in range(3)):
            raise NonClearing("divisor does not divide the dividend")
        qc, r = divmod(c, lead_c)
        if r:
            raise NonClearing(f"coefficient {c} not divisible by {lead_c}")
        quot[qe] = qc
        del rem[e]
        for eb, cb in rest_b:
            k = (qe[0] + eb[0], qe[1] + eb[1], qe[2] + eb[2])
            v = rem.get(k, 0) - qc * cb
            if v:
                if k not in rem:
                    heapq.heappush(heap, (-k[0], -k[1], -k[2]))
                rem[k] = v
            else:
                rem.pop(k, None)
    return MultiPoly._raw(quot)


# A rational substitution for one variable: (numerator, denominator).
Rational = tuple[MultiPoly, MultiPoly]
RationalTriple = tuple[Rational, Rational, Rational]
Factored = Union[MultiPoly, Sequence[tuple[MultiPoly, int]]]

IDENTITY: RationalTriple = ((X, ONE), (Y, ONE), (Z, ONE))


def _as_rational(v) -> Rational:
    if isinstance(v, tuple):
        num, den = v
        return MultiPoly._coerce(num), MultiPoly._coerce(den)
    if isinstance(v, Fraction):
        return MultiPoly.const(v.numerator), MultiPoly.const(v.denominator)
    return MultiPoly._coerce(v), ONE


def _factor_list(f: Factored) -> list[tuple[MultiPoly, int]]:
    if isinstance(f, MultiPoly):
        return [(f, 1)]
    return [(MultiPoly._coerce(b), int(k)) for b, k in f]


def _merge(factors: list[tuple[MultiPoly, int]]) -> dict[MultiPoly, int]:
    out: dict[MultiPoly, int] = {}
    for b, k in factors:
        if k and b != ONE:
            out[b] = out.get(b, 0) + k
    return out


def substitute_rational(
    p: MultiPoly,
    s: Sequence,
    prefactor: Factored = ONE,
    divisor: int = 1,
) -> MultiPoly:
    """Exact ``prefactor * p(s) / divisor``.

    ``s`` holds one ``(num, den)`` pair per variable (plain polynomials,
    ints or Fractions are accepted too).  Denominators are cleared by
    multiplying each term by ``den**(hi - e)`` (``num**(e - lo)`` for
    negative exponents); the collected denominator is then cancelled
    against the prefactor factor-by-factor and the remainder divided out
    exactly.  Any residue raises ``NonClearing``.
    """
    subs = [_as_rational(v) for v in s]
    if len(subs) != 3:
        raise ValueError("substitution needs one entry per variable")
    for num, den in subs:
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in substitution")

    lo = [min(0, p.min_degree(i)) for i in range(3)]
    hi = [max(0, p.degree(i)) for i in range(3)]

    tables = []
    for i, (num, den) in enumerate(subs):
        span = hi[i] - lo[i]
        npow = [ONE]
        for _ in range(span):
            npow.append(npow[-1] * num)
        dpow = [ONE]
        for _ in range(span):
            dpow.append(dpow[-1] * den)
        tables.append({e: npow[e - lo[i]] * dpow[hi[i] - e] for e in range(lo[i], hi[i] + 1)})

    # nested grouping: sum_a X[a] * (sum_b Y[b] * (sum_c coef * Z[c]))
    grouped: dict[int, dict[int, dict[int, int]]] = {}
    for (a, b, c), coef in p.items():
        grouped.setdefault(a, {}).setdefault(b, {})[c] = coef
    q = ZERO
    tx, ty, tz = tables
    for a, by_b in grouped.items():
        inner = ZERO
        for b, by_c in by_b.items():
            zsum = ZERO
            for c, coef in by_c.items():
                zsum = zsum + tz[c] * coef
            inner = inner + ty[b] * zsum
        q = q + tx[a] * inner

    denom_factors = []
    for i, (num, den) in enumerate(subs):
        denom_factors.append((den, hi[i]))
        denom_factors.append((num, -lo[i]))
    den_map = _merge(denom_factors)
    pre_map = _merge(_factor_list(prefactor))
    for base in list(den_map):
        if base in pre_map:
            k = min(den_map[base], pre_map[base])
            den_map[base] -= k
            pre_map[base] -= k

    result = q
    for base, k in pre_map.items():
        if k:
            result = result * base ** k
    for base, k in den_map.items():
        for _ in range(k):
            result = divide_exact(result, base)
    if divisor != 1:
        result = result.scale_div(divisor)
    return result


def shift_var(p: MultiPoly, var: Union[str, int], a: int) -> MultiPoly:
    """Substitute var -> var + a (nonnegative exponents only)."""
    i = _var_index(var)
    if p.min_degree(i) < 0:
        raise ValueError("shift_var needs nonnegative exponents")
    out: dict[Exp, int] = {}
    for e, c in p.items():
        k = e[i]
        for j in range(k + 1):
            f = list(e)
            f[i] = j
            f = tuple(f)
            out[f] = out.get(f, 0) + c * comb(k, j) * a ** (k - j)
    return MultiPoly._raw({e: c for e, c in out.items() if c})


def factor_units(p: MultiPoly) -> list[int]:
    """Peel p = c * prod(1 + x**k_i) into the sorted multiset of k_i."""
    if p.is_zero() or not p.is_univariate_in("x") or p.min_degree("x") < 0:
        raise NotAUnitProduct("expected a nonzero polynomial in x alone")
    ks: list[int] = []
    cur = p
    while True:
        exps = sorted(e[0] for e, _ in cur.items())
        positive = [e for e in exps if e > 0]
        if not positive:
            break
        k = positive[0]
        try:
            cur = divide_exact(cur, ONE + MultiPoly.monomial(k))
        except NonClearing:
            raise NotAUnitProduct(f"division by 1 + x^{k} leaves a remainder") from None
        ks.append(k)
    if cur.constant_term() == 0:
        raise NotAUnitProduct("zero constant term")
    return sorted(ks)

