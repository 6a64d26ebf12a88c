import pytest
from hypothesis import given, strategies as st

from tccs.errors import (ArityMismatch, NonTermination, NotGuardedSum, NotRecursiveGuardedSum, UndeclaredSymbol,
                         UnsupportedRestriction)
from tccs.locgraph import LocGraph
from tccs.syntax import (CGS, CP, EMPTY, NOT_CANONICAL, RCGS, ZERO, Fix, Par, Prefix, Restrict, Signature, Sum,
                         Symbol, Var, as_located, as_par, cansum, classify, free_vars, is_closed, noncanonical_witness,
                         prefix, pretty, process_key, size, substitute_var, sum_of, summands)

X, Y = Var("X"), Var("Y")
a, b = prefix("a"), prefix("b")


def par(comps, edges=()):
    return Par.of(LocGraph.build(comps, edges), comps)


# -- signatures ------------------------------------------------------------

def test_dual_is_an_involution():
    s = Symbol("f")
    assert s.dual() == Symbol("f", True)
    assert s.dual().dual() == s
    assert str(s.dual()) == "co f"


def test_signature_arity_checks():
    sig = Signature({"a": 1, "f": 2})
    sig.check(Symbol("f", True), 2)
    with pytest.raises(ArityMismatch):
        sig.check(Symbol("f"), 1)
    with pytest.raises(UndeclaredSymbol):
        sig.arity("g")
    with pytest.raises(ArityMismatch):
        sig.declare("a", 3)
    with pytest.raises(ValueError):
        Signature({"a": -1})
    assert [str(s) for s in sig.symbols()] == ["a", "co a", "f", "co f"]


# -- canonicity ------------------------------------------------------------

@pytest.mark.parametrize("term, expected", [
    (ZERO, CGS),
    (EMPTY, CP),
    (prefix("a", EMPTY), CGS),
    (Sum(a, b), CGS),
    (Fix("X", prefix("a", X)), RCGS),
    (Fix("X", X), NOT_CANONICAL),
    (Sum(par({1: a, 2: b}), par({1: a})), NOT_CANONICAL),
    (par({1: a, 2: Fix("X", prefix("b", X))}, [(1, 2)]), CP),
    (par({1: par({1: a})}), NOT_CANONICAL),
    (Restrict(par({1: a}), {"a"}), CP),
])
def test_classify(term, expected):
    assert classify(term) is expected


def test_noncanonical_witness_is_innermost():
    bad = Fix("X", X)
    assert noncanonical_witness(prefix("a", bad)) == bad
    assert noncanonical_witness(a) is None


# -- substitution ----------------------------------------------------------

def test_substitute_replaces_free_occurrences_only():
    r = Sum(prefix("a", X), Fix("X", prefix("b", X)))
    out = substitute_var(r, EMPTY, "X")
    assert out == Sum(prefix("a", EMPTY), Fix("X", prefix("b", X)))
    assert free_vars(out) == frozenset()


def test_substitute_avoids_capture():
    r = Fix("Y", prefix("a", X, Y))
    out = substitute_var(r, Y, "X")
    assert isinstance(out, Fix) and out.var != "Y"
    assert out.body == prefix("a", Y, Var(out.var))
    assert free_vars(out) == {"Y"}


def test_substitute_splices_a_composition_into_a_vertex():
    host = Par.of(LocGraph.build([1, 2], [(1, 2)]), {1: a, 2: X})
    inserted = par({1: b, 2: prefix("c")}, [(1, 2)])
    out = substitute_var(host, inserted, "X")
    assert isinstance(out, Par) and len(out.web) == 3
    assert out.graph.is_complete()
    assert is_closed(out)


def test_substitute_leaves_untouched_subterms_identical():
    r = Sum(a, prefix("b", X))
    out = substitute_var(r, ZERO, "X")
    assert out.left is r.left


def test_cansum_unfolds_outer_fixpoint():
    s = Fix("X", Sum(prefix("a", X), prefix("b", ZERO)))
    out = cansum(s)
    assert out == Sum(prefix("a", s), prefix("b", ZERO))
    assert cansum(out) == out


def test_cansum_errors():
    with pytest.raises(NotRecursiveGuardedSum):
        cansum(par({1: a}))
    with pytest.raises(NotRecursiveGuardedSum):
        cansum(Fix("X", X))
    deep = Fix("X", Fix("Y", prefix("a", X, Y)))
    with pytest.raises(NonTermination):
        cansum(Fix("Z", deep), bound=1)


def test_summands_left_to_right():
    gs = sum_of([a, prefix("f", EMPTY, EMPTY, co=True), b])
    assert [(str(s), len(args)) for s, args in summands(gs)] == [("a", 0), ("co f", 2), ("b", 0)]
    assert summands(ZERO) == []
    with pytest.raises(NotGuardedSum):
        summands(Fix("X", prefix("a", X)))


# -- misc ------------------------------------------------------------------

def test_size_and_located_view():
    assert size(prefix("a", EMPTY)) == 2
    assert size(ZERO) == 1
    core, names = as_located(Restrict(a, {"a"}))
    assert names == {"a"} and core.web == {1}
    with pytest.raises(UnsupportedRestriction):
        as_par(Restrict(a, {"a"}))
    with pytest.raises(UnsupportedRestriction):
        substitute_var(par({1: X, 2: a}), Restrict(par({1: b}), {"b"}), "X")


def test_pretty_round_trips_through_parser():
    from tccs.frontend import parse_process
    for term in [Sum(prefix("a", X), b), Fix("X", Sum(prefix("a", X), prefix("b", ZERO))),
                 par({1: a, 2: b, 3: prefix("c", co=True)}, [(1, 2)]), Restrict(par({1: a, 2: b}, [(1, 2)]), {"a"})]:
        if free_vars(term):
            term = Fix("X", term)
        again = parse_process(pretty(term))
        assert process_key(again) == process_key(term)


names = st.sampled_from(["a", "b", "c"])


@st.composite
def guarded_sums(draw, depth=2):
    n = draw(st.integers(0, 3))
    terms = []
    for _ in range(n):
        sym = Symbol(draw(names), draw(st.booleans()))
        args = () if depth == 0 else tuple(
            draw(st.one_of(st.just(EMPTY), guarded_sums(depth=depth - 1))) for _ in range(draw(st.integers(0, 2))))
        terms.append(Prefix(sym, args))
    return sum_of(terms)


@given(guarded_sums())
def test_generated_sums_are_canonical_and_closed(gs):
    assert classify(gs) is CGS
    assert is_closed(gs)
    assert cansum(gs) is gs
    assert substitute_var(gs, ZERO, "X") is gs
