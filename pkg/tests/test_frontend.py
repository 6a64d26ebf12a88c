import json

import pytest

from corpus import CHOICE_P, INTERACTION, proc
from tccs.errors import ArityMismatch, ParseError, UndeclaredSymbol
from tccs.frontend import parse, parse_process
from tccs.frontend.cli import main
from tccs.locgraph import LocGraph, canonical_form
from tccs.syntax import EMPTY, Fix, Restrict, Sum, Var, classify, NOT_CANONICAL, prefix

SOURCE = """\
# choice example
sig f/2, g/2, a/0;
def P = f.(g.(eps, eps), eps) + g.(f.(eps, eps), eps);
def Q = f.(eps, eps) | g.(eps, eps);
def R = co f.(eps, co g.(a.(), eps));
def PR = P | R;
def QR = Q | R;
def L = par {x: a.(), y: co a.(), z: a.()} edges {x-y};
def N = mu X. a.() + f.(X, X);
def H = (a.() | co a.()) \\ {a};
def B = mu X. X;
automaton A { states X; X -> f(X, X); X -> a; }
tree T = f(a, a);
tree U = f(a, g(a, a));
"""


@pytest.fixture
def source_file(tmp_path):
    path = tmp_path / "choice.tccs"
    path.write_text(SOURCE)
    return str(path)


# -- parser --------------------------------------------------------------------

def test_parse_definitions():
    sf = parse(SOURCE)
    assert sf.signature.arities == {"f": 2, "g": 2, "a": 0}
    assert set(sf.definitions) == {"P", "Q", "R", "PR", "QR", "L", "N", "H", "B"}
    assert sf.locations["L"] == {"x": 1, "y": 2, "z": 3}
    assert sf.definitions["L"].graph == LocGraph.build([1, 2, 3], [(1, 2)])
    assert sf.definitions["N"] == Fix("X", Sum(prefix("a"), prefix("f", Var("X"), Var("X"))))
    assert isinstance(sf.definitions["H"], Restrict)
    assert str(sf.trees["T"]) == "f(a,a)"
    assert sf.automata["A"].arities == {"f": 2, "a": 0}


def test_definitions_are_spliced_into_compositions():
    sf = parse(SOURCE)
    pr = sf.definitions["PR"]
    assert pr.web == {1, 2} and pr.graph.is_complete()
    assert canonical_form(pr) == canonical_form(proc(f"({CHOICE_P}) | co f.(eps, co g.(a.(), eps))"))
    assert len(sf.definitions["QR"].web) == 3


def test_not_canonical_is_a_diagnostic():
    sf = parse(SOURCE)
    (d,) = sf.diagnostics
    assert (d.kind, d.name, d.line) == ("NotCanonical", "B", 11)
    assert classify(sf.definitions["B"]) is NOT_CANONICAL


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("def P = a.(\n  eps,, eps);")
    assert (info.value.line, info.value.column) == (2, 7)
    with pytest.raises(ParseError):
        parse("def P = a.() $")


def test_signature_errors():
    with pytest.raises(ArityMismatch):
        parse("sig a/1; def P = a.();")
    with pytest.raises(UndeclaredSymbol):
        parse("sig a/1; def P = b.();")
    with pytest.raises(ArityMismatch):
        parse_process("a.(eps) | a.()")


def test_co_prefix_spellings():
    assert parse_process("co f.(eps, eps)") == parse_process("f~.(eps, eps)")
    assert parse_process("eps") == EMPTY


def test_interaction_text_orders():
    p = proc(INTERACTION)
    q = proc("co a.() | a.() | f.(a.(), co a.()) | co f.(a.(), co a.())")
    assert p.graph == q.graph == LocGraph.complete([1, 2, 3, 4])
    assert canonical_form(p) == canonical_form(q)


# -- command line ----------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_recognize(capsys, source_file):
    code, out, _ = run(capsys, "recognize", source_file, "--automaton", "A", "--state", "X", "--tree", "T",
                       "--oracle")
    assert code == 0 and out.splitlines() == ["interaction: Yes", "oracle: Yes"]
    code, out, _ = run(capsys, "recognize", source_file, "--automaton", "A", "--state", "X", "--tree", "U",
                       "--json")
    data = json.loads(out)
    assert code == 1 and data["schema"] == 1 and data["result"] == "No"
    code, _, _ = run(capsys, "recognize", source_file, "--automaton", "A", "--state", "X", "--tree", "f(a,a)")
    assert code == 0


def test_cli_reduce(capsys, source_file):
    code, out, _ = run(capsys, "reduce", source_file, "--proc", "H", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["steps"]) == 1 and data["stuck"]
    assert data["final"]["web"] == [] and data["final"]["restricted"] == ["a"]
    code, out, _ = run(capsys, "reduce", source_file, "--proc", "P")
    assert code == 0 and out.startswith("0 step(s)")


def test_cli_checks(capsys, source_file):
    assert run(capsys, "check-barbed", source_file, "--left", "PR", "--right", "QR")[0] == 1
    assert run(capsys, "check-barbed", source_file, "--left", "P", "--right", "Q")[0] == 0
    code, out, _ = run(capsys, "check-bisim", source_file, "--left", "P", "--right", "Q", "--json")
    assert code == 1 and json.loads(out)["result"] == "No"
    assert run(capsys, "check-bisim", source_file, "--left", "L", "--right", "L", "--rel", "x-x,y-y,z-z")[0] == 0
    assert run(capsys, "check-bisim", source_file, "--left", "L", "--right", "L", "--rel", "empty")[0] == 1
    assert run(capsys, "falsify-congruence", source_file, "--left", "P", "--right", "P",
               "--max-context", "2")[0] == 2


def test_cli_barbs_and_weak(capsys, source_file):
    code, out, _ = run(capsys, "barbs", source_file, "--proc", "QR", "--weak")
    assert code == 0
    assert out.splitlines() == ["f co f g", "weak: a f co f g co g"]
    code, out, _ = run(capsys, "weak", source_file, "--proc", "L", "--symbol", "a")
    data = json.loads(out)
    assert data["complete"] and {t["origin"] for t in data["transitions"]} == {1, 3}


def test_cli_graph_output(capsys, source_file, tmp_path):
    code, out, _ = run(capsys, "lts", source_file, "--proc", "H")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1 and len(data["states"]) == 2
    dot = tmp_path / "h.dot"
    assert run(capsys, "lts", source_file, "--proc", "H", "--dot", str(dot))[0] == 0
    assert dot.read_text().startswith('digraph "H"')
    code, out, _ = run(capsys, "export-dot", source_file, "--proc", "L")
    assert code == 0 and "l1 -- l2;" in out
    code, out, _ = run(capsys, "export-dot", source_file, "--proc", "H", "--graph", "reductions")
    assert code == 0 and "->" in out


def test_cli_exit_codes(capsys, source_file, tmp_path):
    assert run(capsys, "reduce", source_file, "--proc", "missing")[0] == 64
    assert run(capsys, "reduce", str(tmp_path / "nope.tccs"), "--proc", "P")[0] == 64
    with pytest.raises(SystemExit) as info:
        main(["reduce", source_file])
    assert info.value.code == 64
    code, _, err = run(capsys, "reduce", source_file, "--proc", "B")
    assert code == 65 and "NotCanonical" in err
    bad = tmp_path / "bad.tccs"
    bad.write_text("def P = a.(;\n")
    code, _, err = run(capsys, "reduce", str(bad), "--proc", "P")
    assert code == 65 and ":1:" in err
