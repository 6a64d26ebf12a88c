"""Localized weak bisimulation: checking given relations and deciding bisimilarity.

A triple ``(P, E, Q)`` is challenged by every strong step of P (and, through
the symmetric closure, of Q).  A challenge ``P -> P'`` with residual ``lam`` is
answered by a weak step ``Q => Q'`` with composite residual ``rho`` together
with some ``E'``; the conditions on ``E'`` are downward closed, so each answer
has a unique largest admissible ``E'``:

* tau:       ``(p', q') in E'``  iff  ``(lam p', rho q') in E``
* labelled:  additionally the visible step of Q must fire at a location q with
  ``(p, q) in E`` and, for arities n >= 2, p' and q' must descend from the same
  argument index (or both from no argument).

Because a larger relation is never harder to defend, it suffices to look at
these maximal answers, which turns bisimilarity into a finite game whose
positions are triples up to renaming.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from ..errors import StateSpaceExceeded
from ..locgraph import Location, StateIndex
from ..lts import DEFAULT_TAU_BOUND, labeled_transitions, weak_answers
from ..reduction import DEFAULT_MAX_STATES, labelled_closure, state_signature, successors
from ..syntax import Process, Symbol, as_located, pretty
from ..verdict import YES, Result, Verdict
from .relations import (LocalizedRelation, LocalizedTriple, Relation, TripleIndex, full_relation, transpose,
                        triple_signature)

DEFAULT_MAX_NODES = 20_000


@dataclass
class Challenge:
    side: str  # "left": the left process moves; "right": the right one
    kind: str  # "tau" or "label"
    symbol: Optional[Symbol]
    at: Optional[Location]
    target: Process
    answers: List[Tuple[Process, Relation]]  # (answer target, largest admissible E')
    truncated: bool

    def describe(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"side": self.side, "kind": self.kind, "target": pretty(self.target)}
        if self.kind == "label":
            d["symbol"] = str(self.symbol)
            d["at"] = self.at
        return d


def _rows(rel: Relation, web) -> Dict[Location, FrozenSet[Location]]:
    out: Dict[Location, set] = {x: set() for x in web}
    for a, b in rel:
        out[a].add(b)
    return {k: frozenset(v) for k, v in out.items()}


def challenges(p: Process, e: Relation, q: Process, bound: Optional[int] = DEFAULT_TAU_BOUND,
               max_states: int = DEFAULT_MAX_STATES) -> List[Challenge]:
    """Challenges issued by ``p`` against ``(p, e, q)`` with their maximal answers.

    Challenges that lead to the same answers (isomorphic targets whose
    locations relate to q in the same way) are reported once.
    """
    pw = as_located(p)[0].web
    qw = as_located(q)[0].web
    row = _rows(e, pw)
    col = _rows(transpose(e), qw)
    out: List[Challenge] = []
    seen = StateIndex()

    steps = successors(p)
    if steps:
        clo = labelled_closure(q, col, bound, max_states)
        for st in steps:
            lab = {l: row[m] for l, m in st.residual.mapping.items()}
            names, web, colours, edges = state_signature(st.reduct, lab)
            if not seen.add(("tau", names), web, colours, edges, None)[1]:
                continue
            answers = []
            for ent in clo.entries:
                tw = as_located(ent.process)[0].web
                lam = st.residual
                rel = frozenset((x, y) for x in as_located(st.reduct)[0].web for y in tw
                                if lam(x) in ent.labels[y])
                answers.append((ent.process, rel))
            out.append(Challenge("left", "tau", None, None, st.reduct, answers, not clo.complete))

    cache: Dict[Symbol, Tuple[list, bool]] = {}
    for t in labeled_transitions(p):
        lab = {l: (row[m], t.spawned_index(l)) for l, m in t.residual.mapping.items()}
        names, web, colours, edges = state_signature(t.target, lab)
        if not seen.add(("label", str(t.symbol), repr(sorted(row[t.at])), names), web, colours, edges, None)[1]:
            continue
        if t.symbol not in cache:
            cache[t.symbol] = weak_answers(q, t.symbol, col, bound, max_states)
        found, complete = cache[t.symbol]
        n = t.arity
        answers = []
        tw_p = as_located(t.target)[0].web
        for a in found:
            if t.at not in a.origin_label:
                continue
            rel = frozenset((x, y) for x in tw_p for y, (lab_y, idx) in a.labels.items()
                            if t.residual(x) in lab_y and (n < 2 or t.spawned_index(x) == idx))
            answers.append((a.target, rel))
        out.append(Challenge("left", "label", t.symbol, t.at, t.target, answers, not complete))
    return out


def all_challenges(t: LocalizedTriple, bound=DEFAULT_TAU_BOUND, max_states=DEFAULT_MAX_STATES) -> List[Challenge]:
    """Challenges from both sides; answers to right challenges are re-oriented."""
    out = challenges(t.left, t.rel, t.right, bound, max_states)
    for c in challenges(t.right, transpose(t.rel), t.left, bound, max_states):
        c.side = "right"
        out.append(c)
    return out


def _orient(c: Challenge, answer: Tuple[Process, Relation]) -> LocalizedTriple:
    target, rel = answer
    if c.side == "left":
        return LocalizedTriple(c.target, rel, target)
    return LocalizedTriple(target, transpose(rel), c.target)


def _triple_witness(t: LocalizedTriple, c: Challenge, extra: Optional[dict] = None) -> Dict[str, Any]:
    w = {
        "triple": {"left": pretty(t.left), "right": pretty(t.right), "rel": sorted(t.rel)},
        "challenge": c.describe(),
        "answers_considered": len(c.answers),
    }
    if extra:
        w.update(extra)
    return w


# --------------------------------------------------------------------------
# checking a given relation

def check_localized_bisimulation(r: LocalizedRelation, bound: Optional[int] = DEFAULT_TAU_BOUND,
                                 max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Is the symmetric closure of ``r`` a localized weak bisimulation?

    An answer is accepted when ``r`` (up to renaming, and transposition)
    contains a triple for the answer's processes whose relation is contained
    in the largest admissible one.  Only answers whose tau segments stay within
    ``bound`` steps are tried; a challenge that fails only because the search
    was cut off yields Unknown.
    """
    sym = r.symmetrize()
    index = TripleIndex(sym)
    pending: Optional[Dict[str, Any]] = None
    for t in sym:
        try:
            chs = challenges(t.left, t.rel, t.right, bound, max_states)
        except StateSpaceExceeded as exc:
            pending = pending or {"triple": {"left": pretty(t.left), "right": pretty(t.right)},
                                  "reason": str(exc)}
            continue
        for c in chs:
            if any(index.covers(c.target, rel, target) for target, rel in c.answers):
                continue
            if c.truncated:
                pending = pending or _triple_witness(t, c, {"reason": "bound exhausted"})
                continue
            return Verdict(Result.NO, _triple_witness(t, c))
    if pending is not None:
        return Verdict(Result.UNKNOWN, pending)
    return YES


# --------------------------------------------------------------------------
# deciding bisimilarity (greatest fixpoint over reachable triples)

@dataclass
class _Node:
    triple: LocalizedTriple
    challenges: Optional[List[Challenge]] = None
    succ: List[List[int]] = field(default_factory=list)  # per challenge: answer node ids
    failed: bool = False  # answers could not be computed


class BisimulationGame:
    """Triples reachable from some roots, with challenge/answer structure."""

    def __init__(self, bound: Optional[int] = DEFAULT_TAU_BOUND, max_states: int = DEFAULT_MAX_STATES,
                 max_nodes: int = DEFAULT_MAX_NODES):
        self.bound = bound
        self.max_states = max_states
        self.max_nodes = max_nodes
        self.index = StateIndex()
        self.nodes: List[_Node] = []
        self.complete = True

    def intern(self, t: LocalizedTriple) -> int:
        i, new = self.index.add(*triple_signature(t.left, t.rel, t.right), item=None)
        if new:
            self.nodes.append(_Node(t))
        return i

    def explore(self, roots: Iterable[LocalizedTriple]) -> List[int]:
        ids = [self.intern(t) for t in roots]
        queue = deque(dict.fromkeys(ids))
        while queue:
            i = queue.popleft()
            node = self.nodes[i]
            if node.challenges is not None:
                continue
            if len(self.nodes) > self.max_nodes:
                self.complete = False
                break
            try:
                node.challenges = all_challenges(node.triple, self.bound, self.max_states)
            except StateSpaceExceeded:
                node.challenges, node.failed = [], True
                self.complete = False
                continue
            for c in node.challenges:
                succ = []
                for a in c.answers:
                    j = self.intern(_orient(c, a))
                    succ.append(j)
                    if self.nodes[j].challenges is None:
                        queue.append(j)
                node.succ.append(succ)
        return ids

    def solve(self, optimistic: bool) -> List[bool]:
        """Greatest fixpoint; unresolved information counts for (optimistic) or against."""
        good = []
        for n in self.nodes:
            if n.challenges is None or n.failed:
                good.append(optimistic)
            else:
                good.append(True)
        changed = True
        while changed:
            changed = False
            for i, n in enumerate(self.nodes):
                if not good[i] or n.challenges is None or n.failed:
                    continue
                for c, succ in zip(n.challenges, n.succ):
                    if optimistic and c.truncated:
                        continue
                    if not any(good[j] for j in succ):
                        good[i] = False
                        changed = True
                        break
        return good

    def failing_challenge(self, i: int, good: List[bool]) -> Optional[Challenge]:
        n = self.nodes[i]
        for c, succ in zip(n.challenges or [], n.succ):
            if not c.truncated and not any(good[j] for j in succ):
                return c
        return None

    def relation(self, good: List[bool]) -> LocalizedRelation:
        return LocalizedRelation(n.triple for n, g in zip(self.nodes, good) if g)


def _root_triple(p: Process, q: Process, e: Optional[Iterable]) -> LocalizedTriple:
    rel = full_relation(p, q) if e is None else frozenset(tuple(x) for x in e)
    return LocalizedTriple(p, rel, q)


def bisimilar(p: Process, q: Process, e: Optional[Iterable] = None, bound: Optional[int] = DEFAULT_TAU_BOUND,
              max_states: int = DEFAULT_MAX_STATES, max_nodes: int = DEFAULT_MAX_NODES) -> Verdict:
    """Is there a localized weak bisimulation containing ``(p, e, q)``?

    ``e`` defaults to the full relation ``web(p) x web(q)``, the most
    permissive choice.  Yes is certain; No is certain as well (the failure
    does not depend on any truncated search); Unknown means a bound was hit.
    """
    return _decide(_root_triple(p, q, e), bound, max_states, max_nodes)[0]


def _decide(root: LocalizedTriple, bound, max_states, max_nodes):
    game = BisimulationGame(bound, max_states, max_nodes)
    (i,) = game.explore([root])
    pess = game.solve(optimistic=False)
    if pess[i]:
        return YES, game, pess
    opt = game.solve(optimistic=True)
    if not opt[i]:
        c = game.failing_challenge(i, opt)
        return Verdict(Result.NO, _triple_witness(root, c, {"explored_triples": len(game.nodes)})), game, opt
    return Verdict(Result.UNKNOWN, {"explored_triples": len(game.nodes), "complete": game.complete}), game, pess


def greatest_bisimulation(p: Process, q: Process, e: Optional[Iterable] = None,
                          bound: Optional[int] = DEFAULT_TAU_BOUND, max_states: int = DEFAULT_MAX_STATES,
                          max_nodes: int = DEFAULT_MAX_NODES) -> Tuple[Verdict, LocalizedRelation]:
    """Decide like :func:`bisimilar` and also return the surviving triples.

    When the verdict is Yes the relation is a localized weak bisimulation
    containing the root (up to renaming) and is accepted by
    :func:`check_localized_bisimulation` with the same bound.
    """
    verdict, game, good = _decide(_root_triple(p, q, e), bound, max_states, max_nodes)
    if not verdict.yes:
        return verdict, LocalizedRelation()
    return verdict, game.relation(game.solve(optimistic=False))


def saturate(r: LocalizedRelation, bound: Optional[int] = DEFAULT_TAU_BOUND,
             max_states: int = DEFAULT_MAX_STATES, max_nodes: int = DEFAULT_MAX_NODES) -> LocalizedRelation:
    """Largest bisimulation among the triples reachable from those of ``r``.

    Triples of ``r`` that are not bisimilar are dropped; the result contains
    every surviving one and is closed under answers.
    """
    game = BisimulationGame(bound, max_states, max_nodes)
    game.explore(r)
    return game.relation(game.solve(optimistic=False))
