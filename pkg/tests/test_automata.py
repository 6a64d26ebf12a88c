import pytest
from hypothesis import given, settings, strategies as st

from tccs.automata import (Tree, TreeAutomaton, encode_automaton, encode_tree, interaction_process, parse_tree,
                           recognize_by_interaction, recognizes_oracle)
from tccs.errors import ArityMismatch, UnknownState
from tccs.syntax import EMPTY, RCGS, Fix, Sum, Var, cansum, classify, is_closed, prefix, pretty

BINARY = TreeAutomaton.of([("X", "f", ("X", "X")), ("X", "a", ())])
# even number of g's above a b
EVEN = TreeAutomaton.of([("E", "g", ("O",)), ("O", "g", ("E",)), ("E", "b", ())])


def test_encoding_of_a_one_state_automaton():
    enc = encode_automaton(BINARY, "X")
    X = Var("X")
    assert enc == Fix("X", Sum(prefix("a"), prefix("f", X, X)))
    assert classify(enc) is RCGS and is_closed(enc)
    assert cansum(enc) == Sum(prefix("a"), prefix("f", enc, enc))


def test_encoding_of_mutually_recursive_states():
    enc = encode_automaton(EVEN, "E")
    assert is_closed(enc)
    assert pretty(enc) == "mu E. b.() + g.(mu O. g.(E))"
    assert is_closed(encode_automaton(EVEN, "O"))


def test_tree_encoding_uses_co_prefixes():
    assert encode_tree(parse_tree("f(a, a)")) == prefix("f", prefix("a", co=True), prefix("a", co=True), co=True)
    assert encode_tree(Tree("a")) == prefix("a", co=True)


@pytest.mark.parametrize("text, accepted", [
    ("a", True), ("f(a,a)", True), ("f(f(a,a),a)", True), ("f(a,b)", False), ("g(a,a)", False), ("b", False),
])
def test_binary_automaton(text, accepted):
    t = parse_tree(text)
    assert recognizes_oracle(BINARY, "X", t) is accepted
    v = recognize_by_interaction(BINARY, "X", t)
    assert not v.unknown and v.yes is accepted


@pytest.mark.parametrize("depth, accepted", [(0, True), (1, False), (2, True), (3, False), (4, True)])
def test_parity_automaton(depth, accepted):
    t = Tree("b")
    for _ in range(depth):
        t = Tree("g", (t,))
    assert recognizes_oracle(EVEN, "E", t) is accepted
    assert recognize_by_interaction(EVEN, "E", t).yes is accepted
    assert recognize_by_interaction(EVEN, "O", t).yes is (not accepted)


def test_accepting_run_length():
    v = recognize_by_interaction(BINARY, "X", parse_tree("f(a,a)"))
    assert v.witness["steps"] == 3


def test_interaction_process_shape():
    p = interaction_process(BINARY, "X", parse_tree("a"))
    assert p.graph.is_complete() and p.web == {1, 2}


def test_errors():
    with pytest.raises(UnknownState):
        recognizes_oracle(BINARY, "Y", Tree("a"))
    with pytest.raises(UnknownState):
        TreeAutomaton(frozenset({"X"}), frozenset({("X", "f", ("Z",))}))
    with pytest.raises(ArityMismatch):
        TreeAutomaton.of([("X", "f", ("X",)), ("X", "f", ("X", "X"))])
    with pytest.raises(ArityMismatch):
        parse_tree("f(a, f(a))")
    with pytest.raises(ValueError):
        parse_tree("f(a,")


def test_parse_tree_round_trip():
    t = parse_tree("f(a(), f(a, a))")
    assert str(t) == "f(a,f(a,a))"
    assert parse_tree(str(t)) == t
    assert (t.size, t.depth) == (5, 3)
    assert encode_tree(Tree("f", (Tree("a"), Tree("a")))).args[0].args == ()
    assert EMPTY not in encode_tree(t).args


def trees(depth):
    leaf = st.sampled_from([Tree("a"), Tree("b")])
    if depth <= 1:
        return leaf
    sub = trees(depth - 1)
    return st.one_of(leaf, st.builds(lambda l, r: Tree("f", (l, r)), sub, sub))


@settings(max_examples=60)
@given(trees(4))
def test_interaction_agrees_with_oracle(t):
    assert recognize_by_interaction(BINARY, "X", t).yes == recognizes_oracle(BINARY, "X", t)
