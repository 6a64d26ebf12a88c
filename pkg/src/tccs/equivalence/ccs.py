"""The CCS fragment: projections of localized relations and a classical checker.

On processes whose symbols have arity at most one and whose compositions are
all complete graphs, locations carry no information.  ``ccs_project`` forgets
the location relation and ``ccs_lift`` restores the full one.  The classical
checker decides weak bisimilarity on the plain labelled transition system by
partition refinement, without looking at locations at all.
"""
from __future__ import annotations

from typing import Any, Dict, FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from ..errors import NotCCSFragment, StateSpaceExceeded
from ..lts import lts_graph
from ..reduction import DEFAULT_MAX_STATES
from ..syntax import Par, Process, children, pretty, symbols_of
from ..verdict import YES, Result, Verdict
from .relations import LocalizedRelation, LocalizedTriple, full_relation


def ccs_violation(p: Process) -> str:
    """Why ``p`` is outside the CCS fragment, or the empty string."""
    for name, n in sorted(symbols_of(p).items()):
        if n > 1:
            return f"symbol {name} has arity {n}"
    stack = [p]
    while stack:
        t = stack.pop()
        if isinstance(t, Par) and not t.graph.is_complete():
            return f"composition {pretty(t)} is not complete"
        stack.extend(children(t))
    return ""


def is_ccs_fragment(p: Process) -> bool:
    return not ccs_violation(p)


def _require(p: Process) -> None:
    why = ccs_violation(p)
    if why:
        raise NotCCSFragment(why)


def ccs_project(r: LocalizedRelation) -> FrozenSet[Tuple[Process, Process]]:
    """Pairs related by some triple of ``r``."""
    out = set()
    for t in r:
        _require(t.left)
        _require(t.right)
        out.add((t.left, t.right))
    return frozenset(out)


def ccs_lift(u: Iterable[Tuple[Process, Process]]) -> LocalizedRelation:
    """Triples pairing each related couple with the full location relation."""
    out = []
    for p, q in u:
        _require(p)
        _require(q)
        out.append(LocalizedTriple(p, full_relation(p, q), q))
    return LocalizedRelation(out)


def _saturate(n: int, edges: List[Tuple[int, int, str]]) -> List[Set[Tuple[str, int]]]:
    """Weak moves per state: ``("tau", t)`` for ``t`` in the tau* closure, ``(a, t)`` for tau* a tau*."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(n))
    dg.add_edges_from((s, d) for s, d, lab in edges if lab == "tau")
    tau_star = [set(nx.descendants(dg, i)) | {i} for i in range(n)]
    visible: List[List[Tuple[str, int]]] = [[] for _ in range(n)]
    for s, d, lab in edges:
        if lab != "tau":
            visible[s].append((lab, d))
    moves: List[Set[Tuple[str, int]]] = []
    for i in range(n):
        m = {("tau", t) for t in tau_star[i]}
        for mid in tau_star[i]:
            for lab, d in visible[mid]:
                m.update((lab, t) for t in tau_star[d])
        moves.append(m)
    return moves


def ccs_weak_bisimilar(p: Process, q: Process, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Classical weak bisimilarity by partition refinement on the saturated LTS."""
    _require(p)
    _require(q)
    try:
        ps, pe = lts_graph(p, max_states)
        qs, qe = lts_graph(q, max_states)
    except StateSpaceExceeded as exc:
        return Verdict(Result.UNKNOWN, {"reason": str(exc)})
    off = len(ps)
    n = off + len(qs)
    edges = pe + [(s + off, d + off, lab) for s, d, lab in qe]
    moves = _saturate(n, edges)
    block = [0] * n
    rounds = 0
    while True:
        rounds += 1
        sig = [(block[i], frozenset((lab, block[t]) for lab, t in moves[i])) for i in range(n)]
        ids: Dict[Any, int] = {}
        new = [ids.setdefault(s, len(ids)) for s in sig]
        if len(ids) == len(set(block)):
            break
        block = new
    if block[0] == block[off]:
        return YES
    mine = {(lab, block[t]) for lab, t in moves[0]}
    theirs = {(lab, block[t]) for lab, t in moves[off]}
    diff = sorted(mine ^ theirs)
    lab, b = diff[0]
    return Verdict(Result.NO, {"kind": "partition", "label": lab,
                               "side": "left" if (lab, b) in mine else "right",
                               "blocks": len(set(block)), "rounds": rounds})
