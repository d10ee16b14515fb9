"""Command-line front end.

Exit codes: 0 success, 1 parse or contract error, 2 identity failure,
inconsistent deck or tree collision, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from bipartkit.bipartition import (
    EDGE_METHODS,
    METHODS,
    SUBSET_METHODS,
    CapacityError,
    bipartition_polynomial,
    definition_budget,
    definition_cost,
)
from bipartkit.derived import OUTPUT_VARS, TARGETS, derive
from bipartkit.identities import IDENTITIES, verify
from bipartkit.invariants import graph_stats, predicates
from bipartkit.multigraph import Multigraph, enumerate_trees, parse_graph
from bipartkit.oracles import BudgetExceeded
from bipartkit.polyring import MultiPoly
from bipartkit.reconstruction import (
    PolyDeck,
    ReconstructionError,
    Unique,
    poly_deck,
    reconstruct,
)

MAX_SUBSET_N = 20
MAX_EDGE_M = 24


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_graph(path: str, fmt: str | None) -> Multigraph:
    if fmt is None:
        fmt = "graph6" if path.endswith(".g6") else "edge-list"
    return parse_graph(Path(path).read_text(), fmt)


def _check_budget(g: Multigraph, method: str, force: bool) -> None:
    if force:
        return
    if method == "auto":
        if g.n > MAX_SUBSET_N and g.m > MAX_EDGE_M:
            raise BudgetExceeded(f"n={g.n} > {MAX_SUBSET_N} and m={g.m} > {MAX_EDGE_M}")
        return
    if method in SUBSET_METHODS and g.n > MAX_SUBSET_N:
        raise BudgetExceeded(f"n={g.n} > {MAX_SUBSET_N} for method {method}")
    if method in EDGE_METHODS and g.m > MAX_EDGE_M:
        raise BudgetExceeded(f"m={g.m} > {MAX_EDGE_M} for method {method}")


def _compute(g: Multigraph, method: str, force: bool) -> MultiPoly:
    _check_budget(g, method, force)
    if method == "definition" and g.n <= 26:
        cost = definition_cost(g)
        if cost > definition_budget():
            print(f"warning: definition method needs {cost} inner iterations", file=sys.stderr)
    return bipartition_polynomial(g, method)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def cmd_compute(args) -> int:
    g = _read_graph(args.input, args.format)
    b = _compute(g, args.method, args.force)
    print(b.pretty() if args.out == "pretty" else b.to_json())
    return 0


def cmd_derive(args) -> int:
    g = _read_graph(args.input, args.format)
    b = _compute(g, "auto", args.force)
    p = derive(b, graph_stats(b), args.target, args.r)
    names = OUTPUT_VARS[args.target]
    obj = p.to_json_obj()
    obj["target"] = args.target
    # which slot carries which output variable
    obj["variables"] = {"t": "x"} if names == ("t",) else {v: v for v in names}
    print(_dump(obj))
    return 0


def cmd_props(args) -> int:
    b = MultiPoly.from_json(Path(args.poly).read_text())
    st = graph_stats(b)
    out = {
        "stats": {
            "n": st.n,
            "m": st.m,
            "k": st.k,
            "iso": st.iso,
            "comp_orders": list(st.comp_orders),
            "degseq": list(st.degseq),
        },
        "predicates": predicates(b, st),
    }
    print(_dump(out))
    return 0


def cmd_deck(args) -> int:
    g = _read_graph(args.input, args.format)
    _check_budget(g, "auto", args.force)
    print(_dump(poly_deck(g).to_json_obj()))
    return 0


def cmd_reconstruct(args) -> int:
    raw = json.loads(Path(args.deck).read_text())
    if not isinstance(raw, list):
        raise UsageError("deck file must hold a JSON array of polynomials")
    result = reconstruct(PolyDeck.from_json_obj(raw))
    if isinstance(result, Unique):
        out = {"result": "unique", "poly": result.b.to_json_obj()}
    else:
        out = {
            "result": "ambiguous",
            "family": result.family,
            "t": result.t,
            "members": [{"name": name, "poly": b.to_json_obj()} for name, b in result.members],
        }
    print(_dump(out))
    return 0


def cmd_verify(args) -> int:
    g = _read_graph(args.input, args.format)
    dual = _read_graph(args.dual, args.format) if args.dual else None
    report = verify(g, args.id, dual)
    print(_dump(report.to_json_obj()))
    return 0 if report.passed else 2


def cmd_trees_distinct(args) -> int:
    if args.max_order < 1:
        raise UsageError("--max-order must be at least 1")
    seen: dict[MultiPoly, list[Multigraph]] = defaultdict(list)
    total = 0
    for order in range(1, args.max_order + 1):
        for t in enumerate_trees(order):
            seen[bipartition_polynomial(t)].append(t)
            total += 1
    collisions = [ts for ts in seen.values() if len(ts) > 1]
    for ts in collisions:
        print("collision: " + " | ".join(str(list(t.edges)) for t in ts))
    print(f"{len(collisions)} collisions among {total} trees")
    return 2 if collisions else 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bipartkit", description="Exact bipartition polynomials of multigraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_input(sp):
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--format", choices=("edge-list", "graph6"))
        sp.add_argument("--force", action="store_true", help="ignore the size budget")

    c = sub.add_parser("compute")
    graph_input(c)
    c.add_argument("--method", choices=("auto",) + METHODS, default="auto")
    c.add_argument("--out", choices=("json", "pretty"), default="json")
    c.set_defaults(func=cmd_compute)

    d = sub.add_parser("derive")
    graph_input(d)
    d.add_argument("--target", choices=TARGETS, required=True)
    d.add_argument("--r", type=int)
    d.set_defaults(func=cmd_derive)

    pr = sub.add_parser("props")
    pr.add_argument("--poly", required=True)
    pr.set_defaults(func=cmd_props)

    dk = sub.add_parser("deck")
    graph_input(dk)
    dk.set_defaults(func=cmd_deck)

    r = sub.add_parser("reconstruct")
    r.add_argument("--deck", required=True)
    r.set_defaults(func=cmd_reconstruct)

    v = sub.add_parser("verify")
    graph_input(v)
    v.add_argument("--id", choices=IDENTITIES, required=True)
    v.add_argument("--dual")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("trees-distinct")
    t.add_argument("--max-order", type=int, required=True)
    t.set_defaults(func=cmd_trees_distinct)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (BudgetExceeded, CapacityError) as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ReconstructionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, OSError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
