import random

import pytest

from corpus import ARITIES, INTERACTION, proc
from tccs.errors import InvalidRedex, OpenProcess, StateSpaceExceeded
from tccs.generate import random_process
from tccs.locgraph import LocGraph
from tccs.reduction import Redex, Residual, enumerate_redexes, explore, is_empty, is_stuck, step, tau_closure
from tccs.syntax import EMPTY, Par, Restrict, Symbol, Var, as_located, prefix

A = Symbol("a")


def test_empty_process_has_no_redex():
    assert enumerate_redexes(EMPTY) == []
    assert is_empty(EMPTY) and is_stuck(EMPTY)


def test_incoherent_duals_do_not_interact():
    p = Par.of(LocGraph.build([1, 2]), {1: prefix("a"), 2: prefix("a", co=True)})
    assert is_stuck(p)


def test_simple_interaction_empties_the_web():
    p = proc("a.() | co a.()")
    (r,) = enumerate_redexes(p)
    assert (r.p, r.q, r.symbol) == (1, 2, A)
    st = step(p, r)
    assert is_empty(st.reduct)
    assert st.residual.domain() == frozenset()
    assert st.spawned_p == () and st.spawned_q == ()


def test_co_side_listed_second():
    p = proc("co a.() | a.()")
    assert [(r.p, r.q) for r in enumerate_redexes(p)] == [(2, 1)]


def test_invalid_redexes():
    p = proc("a.() | co a.()")
    with pytest.raises(InvalidRedex):
        step(p, Redex(1, 3, A, 0, 0))
    with pytest.raises(InvalidRedex):
        step(p, Redex(1, 2, A, 0, 5))
    with pytest.raises(InvalidRedex):
        step(p, Redex(2, 1, A, 0, 0))
    apart = Par.of(LocGraph.build([1, 2]), {1: prefix("a"), 2: prefix("a", co=True)})
    with pytest.raises(InvalidRedex):
        step(apart, Redex(1, 2, A, 0, 0))


def test_free_variable_in_active_position():
    p = Par.of(LocGraph.build([1, 2], [(1, 2)]), {1: prefix("a", Var("X")), 2: prefix("a", EMPTY, co=True)})
    with pytest.raises(OpenProcess):
        step(p, enumerate_redexes(p)[0])


def test_interaction_example_counts():
    p = proc(INTERACTION)
    g = explore(p)
    assert g.complete
    assert (len(g.states), len(g.edges)) == (7, 12)
    assert [len(tau_closure(p, b)) for b in range(5)] == [1, 3, 8, 12, 12]
    assert tau_closure(p, 0) == [(p, Residual.identity([1, 2, 3, 4]))]


def test_bounded_exploration_records_frontier():
    g = explore(proc(INTERACTION), bound=1)
    assert not g.complete
    assert g.frontier and all(g.depth[i] == 1 for i in g.frontier)
    with pytest.raises(StateSpaceExceeded):
        explore(proc(INTERACTION), max_states=3)


def test_stop_predicate():
    g = explore(proc(INTERACTION), stop=is_stuck)
    assert g.found is not None and is_stuck(g.states[g.found])
    assert len(g.path_to(g.found)) == g.depth[g.found]


def test_restriction_passes_through_reduction():
    p = Restrict(proc("a.() | co a.()"), {"a"})
    st = step(p, enumerate_redexes(p)[0])
    assert isinstance(st.reduct, Restrict) and st.reduct.names == {"a"}
    assert is_empty(st.reduct)


def _random_steps(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        p = random_process(rng, ARITIES, max_components=4)
        for r in enumerate_redexes(p):
            out.append((p, r))
    return out


def test_step_laws_on_random_processes():
    for p, r in _random_steps(11, 200):
        st = step(p, r)
        src, _ = as_located(p)
        dst, _ = as_located(st.reduct)
        lam = st.residual
        # residual: total on the reduct, into the source, identity off the redex
        assert lam.domain() == dst.web
        assert lam.image() <= src.web
        spawned = set().union(*st.spawned_p, *st.spawned_q)
        for l in dst.web - spawned:
            assert lam(l) == l
        for l in spawned:
            assert lam(l) == (r.p if any(l in w for w in st.spawned_p) else r.q)
        # coherence between a survivor and anything else is inherited
        for u in dst.web - spawned:
            for v in dst.web:
                if u != v:
                    assert dst.coherent(u, v) == src.coherent(lam(u), lam(v))
        # spawned argument i on one side meets only argument i on the other
        for i, wp in enumerate(st.spawned_p):
            for j, wq in enumerate(st.spawned_q):
                for u in wp:
                    for v in wq:
                        assert dst.coherent(u, v) == (i == j)
        assert step(p, r) == st


def test_tau_closure_grows_with_the_bound():
    rng = random.Random(3)
    for _ in range(30):
        p = random_process(rng, ARITIES, max_components=3)
        sizes = [len(tau_closure(p, b)) for b in range(4)]
        assert sizes == sorted(sizes)
        for q, lam in tau_closure(p, 3):
            assert lam.domain() == as_located(q)[0].web
