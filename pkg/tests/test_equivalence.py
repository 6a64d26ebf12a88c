import random

import pytest

from corpus import CHOICE_P, CHOICE_Q, INTERLEAVED, OBSERVER, SEQUENTIAL, choice_pair, proc, small_processes
from tccs.errors import MalformedRelation, NotAdapted, NotCCSFragment
from tccs.equivalence import (LocalizedRelation, LocalizedTriple, Result, Verdict, barbed_bisimilar, bisimilar,
                              ccs_lift, ccs_project, check_localized_bisimulation, compose_localized,
                              greatest_bisimulation, identity_relation, is_adapted, is_ccs_fragment,
                              parallel_extension, refute_congruence, saturate)
from tccs.generate import reorder_sums
from tccs.syntax import Signature


def _interleaving():
    v, r = greatest_bisimulation(proc(INTERLEAVED), proc(SEQUENTIAL), bound=16)
    assert v.yes
    return r


# -- relations ---------------------------------------------------------------

def test_triple_rejects_pairs_outside_the_webs():
    with pytest.raises(MalformedRelation):
        LocalizedTriple(proc("a.()"), {(1, 2)}, proc("a.()"))


def test_symmetrize_is_idempotent():
    r = _interleaving()
    s = r.symmetrize()
    assert s.is_symmetric()
    assert s.symmetrize() == s
    assert s.transpose() == s


def test_no_verdict_needs_a_witness():
    with pytest.raises(ValueError):
        Verdict(Result.NO)
    assert str(Verdict(Result.UNKNOWN)) == "Unknown"


def test_is_adapted():
    e = {(1, 1)}
    assert is_adapted({(9, 1)}, {(9, 1)}, e)
    assert not is_adapted({(9, 1)}, set(), e)
    assert is_adapted({(9, 1)}, set(), set())
    assert not is_adapted({(9, 1)}, {(9, 1)}, {(1, 1), (1, 2)})
    assert is_adapted({(9, 1)}, {(9, 1), (9, 2)}, {(1, 1), (1, 2)})


# -- localized bisimulation ----------------------------------------------------

def test_identity_relation_is_a_bisimulation():
    i = identity_relation([proc(CHOICE_P), proc(OBSERVER)])
    assert len(i) > 2
    assert check_localized_bisimulation(i).yes


def test_interleaving_is_localized_bisimilar():
    r = _interleaving()
    assert check_localized_bisimulation(r, bound=16).yes


def test_choice_pair_is_not_bisimilar_for_any_relation():
    p, q, _ = choice_pair()
    for e in (set(), {(1, 1)}, None):
        v = bisimilar(p, q, e)
        assert v.no and v.witness is not None


def test_empty_relation_loses_the_first_challenge():
    v = bisimilar(proc("a.()"), proc("a.()"), set())
    assert v.no
    assert bisimilar(proc("a.()"), proc("a.()"), {(1, 1)}).yes


def test_check_rejects_a_non_bisimulation():
    p, q, _ = choice_pair()
    r = LocalizedRelation([LocalizedTriple(p, {(1, 1), (1, 2)}, q)])
    assert check_localized_bisimulation(r).no


def test_composition_with_identity_and_empty():
    r = _interleaving()
    ident = identity_relation(r.processes())
    assert check_localized_bisimulation(compose_localized(r, ident), bound=16).yes
    assert check_localized_bisimulation(compose_localized(ident, r), bound=16).yes
    assert len(compose_localized(r, LocalizedRelation())) == 0


def test_union_of_bisimulations_is_one():
    r = _interleaving()
    i = identity_relation([proc(CHOICE_Q)])
    assert check_localized_bisimulation(r | i, bound=16).yes


def test_saturate_keeps_bisimilar_triples_only():
    p, q, _ = choice_pair()
    bad = LocalizedTriple(p, {(1, 1), (1, 2)}, q)
    good = next(iter(_interleaving()))
    out = saturate(LocalizedRelation([bad, good]), bound=16)
    assert bad not in out and good in out


def test_parallel_extension_of_identity():
    p = proc(CHOICE_Q)
    ident = LocalizedRelation([LocalizedTriple(p, {(1, 1), (2, 2)}, p)])
    s = proc(OBSERVER)
    ext = parallel_extension(ident, s, {(1, 1)}, {(1, 1)})
    (t,) = ext
    assert t.rel == {(3, 3), (1, 1), (2, 2)}
    assert bisimilar(t.left, t.right, t.rel).yes


def test_parallel_extension_keeps_symmetry():
    r = _interleaving().symmetrize()
    full = {(1, x) for x in range(1, 10)}
    ext = parallel_extension(r, proc("co a.(eps)"), full, full)
    assert ext.is_symmetric()


def test_parallel_extension_rejects_unadapted_specs():
    r = LocalizedRelation([LocalizedTriple(proc(INTERLEAVED), {(1, 1)}, proc(SEQUENTIAL))])
    with pytest.raises(NotAdapted):
        parallel_extension(r, proc("co a.()"), {(1, 1)}, set())


# -- barbed bisimilarity and congruence ---------------------------------------

def test_barbed_examples():
    assert barbed_bisimilar(proc(INTERLEAVED), proc(SEQUENTIAL)).yes
    v = barbed_bisimilar(proc("a.()"), proc("b.()"))
    assert v.no and v.witness["kind"] == "barb" and v.witness["barb"] in ("a", "b")
    v = barbed_bisimilar(proc("a.() | co a.()"), proc("a.() + co a.()"))
    assert v.no and v.witness["kind"] == "reduction"


def test_bisimilar_implies_barbed():
    hits = 0
    for rng, p in small_processes(23, 25):
        q = reorder_sums(p, rng)
        if bisimilar(p, q, bound=8).yes:
            hits += 1
            assert barbed_bisimilar(p, q).yes
    assert hits >= 20


def test_refute_congruence():
    p = proc(CHOICE_Q)
    v = refute_congruence(p, p, 3)
    assert v.unknown and v.witness["contexts_tried"] > 0
    v = refute_congruence(proc("a.()"), proc("b.()"), 3)
    assert v.no and v.witness["context"] == "Y" and v.witness["size"] == 1


def test_refute_congruence_uses_the_signature():
    sig = Signature({"a": 0, "c": 0})
    v = refute_congruence(proc("a.()"), proc("a.()"), 2, signature=sig)
    assert v.unknown


# -- CCS fragment ---------------------------------------------------------------

def test_ccs_fragment_membership():
    assert is_ccs_fragment(proc("a.(b.()) | co a.(eps)"))
    assert not is_ccs_fragment(proc(CHOICE_P))
    assert not is_ccs_fragment(proc("par {l1: a.(), l2: b.()} edges {}"))


def test_ccs_project_and_lift():
    p, q = proc(INTERLEAVED), proc(SEQUENTIAL)
    lifted = ccs_lift([(p, q)])
    (t,) = lifted
    assert t.rel == {(1, 1), (2, 1)}
    assert ccs_project(lifted) == {(p, q)}
    with pytest.raises(NotCCSFragment):
        ccs_lift([(proc(CHOICE_P), proc(CHOICE_Q))])


def test_projection_of_a_bisimulation_relates_ccs_bisimilar_pairs():
    from tccs.equivalence import ccs_weak_bisimilar
    for left, right in ccs_project(_interleaving()):
        assert ccs_weak_bisimilar(left, right).yes


def test_congruence_sampling_on_variants():
    rng = random.Random(4)
    p = proc(SEQUENTIAL)
    q = reorder_sums(p, rng)
    assert refute_congruence(p, q, 4).unknown
