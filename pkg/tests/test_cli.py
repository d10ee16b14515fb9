import json
import subprocess
import sys

import pytest

from bipartkit.bipartition import METHODS
from bipartkit.cli import run
from bipartkit.multigraph import Multigraph, disjoint_union, cycle_graph, empty_graph, path_graph, to_edge_list
from bipartkit.polyring import MultiPoly

import suites


@pytest.fixture
def write(tmp_path):
    def _write(name, content):
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)

    return _write


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_definition(write, capsys):
    p3 = write("p3.el", "3 2\n0 1\n1 2\n")
    code, out, _ = call(capsys, "compute", "--in", p3, "--method", "definition")
    assert code == 0
    assert MultiPoly.from_json(out) == suites.poly(path_graph(3))


def test_all_methods_print_identical_json(write, capsys):
    g = write("g.el", to_edge_list(Multigraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (3, 4)))))
    outputs = {call(capsys, "compute", "--in", g, "--method", m)[1] for m in METHODS + ("auto",)}
    assert len(outputs) == 1


def test_output_is_byte_stable(write, capsys):
    g = write("c4.el", to_edge_list(cycle_graph(4)))
    first = call(capsys, "deck", "--in", g)[1]
    assert call(capsys, "deck", "--in", g)[1] == first


def test_pretty_output(write, capsys):
    g = write("p2.el", "2 1\n0 1\n")
    code, out, _ = call(capsys, "compute", "--in", g, "--out", "pretty")
    assert code == 0 and "x" in out and "{" not in out


def test_graph6_input(write, capsys):
    g = write("k3.g6", "Bw\n")
    code, out, _ = call(capsys, "compute", "--in", g)
    assert code == 0 and MultiPoly.from_json(out) == suites.poly(cycle_graph(3))


def test_derive(write, capsys):
    g = write("p3.el", "3 2\n0 1\n1 2\n")
    code, out, _ = call(capsys, "derive", "--in", g, "--target", "domination")
    obj = json.loads(out)
    assert code == 0 and obj["target"] == "domination"
    assert MultiPoly.from_json_obj(obj) == MultiPoly({(1, 0, 0): 1, (2, 0, 0): 3, (3, 0, 0): 1})
    code, out, _ = call(capsys, "derive", "--in", g, "--target", "matching")
    assert json.loads(out)["variables"] == {"t": "x"}
    code, _, err = call(capsys, "derive", "--in", g, "--target", "independence_regular")
    assert code == 1 and "NotRegular" in err


def test_props(write, capsys):
    poly = write("b.json", suites.poly(path_graph(3)).to_json())
    code, out, _ = call(capsys, "props", "--poly", poly)
    obj = json.loads(out)
    assert code == 0
    assert obj["stats"] == {"n": 3, "m": 2, "k": 1, "iso": 0, "comp_orders": [3], "degseq": [1, 1, 2]}
    assert obj["predicates"] == {"bipartite": True, "forest": True, "connected": True, "path": True}


def test_props_rejects_non_bipartition_poly(write, capsys):
    poly = write("b.json", {"terms": [{"x": 1, "y": 0, "z": 0, "c": "2"}, {"x": 0, "y": 0, "z": 0, "c": "1"}]})
    assert call(capsys, "props", "--poly", poly)[0] == 1


def test_deck_then_reconstruct(write, capsys, tmp_path):
    g = write("c4.el", to_edge_list(cycle_graph(4)))
    deck = write("c4.deck.json", call(capsys, "deck", "--in", g)[1])
    code, out, _ = call(capsys, "reconstruct", "--deck", deck)
    obj = json.loads(out)
    assert code == 0 and obj["result"] == "unique"
    assert MultiPoly.from_json_obj(obj["poly"]) == suites.poly(cycle_graph(4))


def test_reconstruct_reports_family(write, capsys):
    c3p1 = write("c3p1.el", to_edge_list(disjoint_union(cycle_graph(3), empty_graph(1))))
    deck = write("c3p1.deck.json", call(capsys, "deck", "--in", c3p1)[1])
    code, out, _ = call(capsys, "reconstruct", "--deck", deck)
    obj = json.loads(out)
    assert code == 0 and obj["result"] == "ambiguous" and obj["t"] == 0
    assert {m["name"] for m in obj["members"]} == {"C3+P1", "K1,3"}


def test_reconstruct_inconsistent_deck(write, capsys):
    deck = write("bad.json", [suites.poly(path_graph(2)).to_json_obj(), suites.poly(path_graph(3)).to_json_obj()])
    code, _, err = call(capsys, "reconstruct", "--deck", deck)
    assert code == 2 and "InconsistentDeck" in err
    deck = write("obj.json", {"not": "a list"})
    assert call(capsys, "reconstruct", "--deck", deck)[0] == 1


def test_verify(write, capsys):
    c3 = write("c3.el", to_edge_list(cycle_graph(3)))
    d3 = write("d3.el", "2 3\n0 1\n0 1\n0 1\n")
    code, out, _ = call(capsys, "verify", "--in", c3, "--id", "planar_dual", "--dual", d3)
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, _ = call(capsys, "verify", "--in", c3, "--id", "activity_sum")
    assert code == 0 and json.loads(out)["left"] == "-2"
    code, out, _ = call(capsys, "verify", "--in", c3, "--id", "planar_dual", "--dual", c3)
    assert code == 2 and json.loads(out)["passed"] is False
    assert call(capsys, "verify", "--in", c3, "--id", "planar_dual")[0] == 1


def test_trees_distinct(capsys):
    code, out, _ = call(capsys, "trees-distinct", "--max-order", "10")
    assert code == 0 and out.strip() == "0 collisions among 201 trees"
    assert call(capsys, "trees-distinct", "--max-order", "0")[0] == 1


def test_budget_exit_code(write, capsys):
    # refusal looks at n only; an edgeless graph keeps the forced run instant
    big = write("big.el", to_edge_list(empty_graph(21)))
    code, _, err = call(capsys, "compute", "--in", big, "--method", "definition")
    assert code == 3 and "budget" in err
    code, out, _ = call(capsys, "compute", "--in", big, "--method", "definition", "--force")
    assert code == 0
    # auto switches to an edge method and needs no override
    assert call(capsys, "compute", "--in", big)[0] == 0
    long_path = write("p22.el", to_edge_list(path_graph(22)))
    assert call(capsys, "compute", "--in", long_path, "--method", "product")[0] == 3
    assert call(capsys, "compute", "--in", long_path)[0] == 0


def test_definition_cost_warning(write, capsys, monkeypatch):
    monkeypatch.setenv("BIPARTKIT_DEFINITION_BUDGET", "10")
    g = write("p3.el", "3 2\n0 1\n1 2\n")
    code, _, err = call(capsys, "compute", "--in", g, "--method", "definition")
    assert code == 0 and "warning" in err


@pytest.mark.parametrize("argv", [
    [],
    ["compute"],
    ["compute", "--in", "/nonexistent/file.el"],
    ["explode"],
    ["derive", "--in", "x.el", "--target", "tutte"],
])
def test_usage_errors(argv, capsys):
    assert call(capsys, *argv)[0] == 1


def test_malformed_graph_file(write, capsys):
    g = write("bad.el", "3 2\n0 1\n")
    code, _, err = call(capsys, "compute", "--in", g)
    assert code == 1 and err.startswith("error:")


def test_module_entry_point(write):
    g = write("p2.el", "2 1\n0 1\n")
    out = subprocess.run(
        [sys.executable, "-m", "bipartkit", "compute", "--in", g], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert MultiPoly.from_json(out.stdout) == suites.poly(path_graph(2))
