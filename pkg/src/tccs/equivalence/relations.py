"""Localized relations and the operations on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

import networkx as nx

from ..errors import MalformedRelation, NotAdapted
from ..locgraph import Location, StateIndex, gplus, isomorphisms, to_networkx
from ..syntax import Par, Process, as_located, process_key, rename_locations, term_key, wrap_restrictions

Pair = Tuple[Location, Location]
Relation = FrozenSet[Pair]


def transpose(rel: Iterable[Pair]) -> Relation:
    return frozenset((b, a) for a, b in rel)


def identity_on(locs: Iterable[Location]) -> Relation:
    return frozenset((l, l) for l in locs)


def full_relation(p: Process, q: Process) -> Relation:
    return frozenset((a, b) for a in as_located(p)[0].web for b in as_located(q)[0].web)


@dataclass(frozen=True)
class LocalizedTriple:
    left: Process
    rel: Relation
    right: Process

    def __post_init__(self):
        object.__setattr__(self, "rel", frozenset(self.rel))
        lw, rw = as_located(self.left)[0].web, as_located(self.right)[0].web
        for a, b in self.rel:
            if a not in lw or b not in rw:
                raise MalformedRelation(f"pair ({a}, {b}) is not in web(left) x web(right)")

    def transpose(self) -> "LocalizedTriple":
        return LocalizedTriple(self.right, transpose(self.rel), self.left)


def triple_signature(left: Process, rel: Iterable[Pair], right: Process):
    """StateIndex arguments describing a triple up to renaming on both sides."""
    lp, ln = as_located(left)
    rp, rn = as_located(right)
    verts = [("L", l) for l in lp.web] + [("R", r) for r in rp.web]
    colours = {("L", l): "L" + term_key(c) for l, c in lp.components}
    colours.update({("R", r): "R" + term_key(c) for r, c in rp.components})
    edges = {frozenset(("L", x) for x in e): 1 for e in lp.graph.edges}
    edges.update({frozenset(("R", x) for x in e): 1 for e in rp.graph.edges})
    edges.update({frozenset((("L", a), ("R", b))): 2 for a, b in rel})
    return (tuple(sorted(ln)), tuple(sorted(rn))), verts, colours, edges


def triple_graph(left: Process, rel: Iterable[Pair], right: Process) -> nx.Graph:
    _, verts, colours, edges = triple_signature(left, rel, right)
    return to_networkx(verts, colours, edges)


class LocalizedRelation:
    """A finite set of localized triples."""

    def __init__(self, triples: Iterable[LocalizedTriple] = ()):
        self.triples: FrozenSet[LocalizedTriple] = frozenset(triples)

    def __iter__(self) -> Iterator[LocalizedTriple]:
        return iter(sorted(self.triples, key=_triple_order))

    def __len__(self):
        return len(self.triples)

    def __contains__(self, t):
        return t in self.triples

    def __eq__(self, other):
        return isinstance(other, LocalizedRelation) and self.triples == other.triples

    def __hash__(self):
        return hash(self.triples)

    def __or__(self, other: "LocalizedRelation") -> "LocalizedRelation":
        return LocalizedRelation(self.triples | other.triples)

    def __repr__(self):
        return f"LocalizedRelation({len(self)} triples)"

    def transpose(self) -> "LocalizedRelation":
        return LocalizedRelation(t.transpose() for t in self.triples)

    def symmetrize(self) -> "LocalizedRelation":
        return self | self.transpose()

    def is_symmetric(self) -> bool:
        return self.symmetrize() == self

    def processes(self) -> Set[Process]:
        return {t.left for t in self.triples} | {t.right for t in self.triples}


def _triple_order(t: LocalizedTriple):
    return (process_key(t.left), process_key(t.right), sorted(t.rel))


class TripleIndex:
    """Membership of triples up to renaming, optionally below a relation bound.

    ``covers(P, E, Q)`` holds when some stored triple is isomorphic to
    ``(P, E', Q)`` for some ``E' <= E``.
    """

    def __init__(self, relation: Iterable[LocalizedTriple]):
        self.exact = StateIndex()
        self.by_pair: Dict[Tuple[str, str], List[Tuple[LocalizedTriple, Optional[nx.Graph]]]] = {}
        for t in relation:
            self.exact.add(*triple_signature(t.left, t.rel, t.right), item=t)
            self.by_pair.setdefault((process_key(t.left), process_key(t.right)), []).append([t, None])

    def covers(self, left: Process, rel: Relation, right: Process) -> bool:
        if self.exact.find(*triple_signature(left, rel, right)) is not None:
            return True
        cands = self.by_pair.get((process_key(left), process_key(right)), [])
        if not cands:
            return False
        g1 = None
        for entry in cands:
            t = entry[0]
            if len(t.rel) > len(rel):
                continue
            if g1 is None:
                g1 = triple_graph(left, rel, right)
            if entry[1] is None:
                entry[1] = triple_graph(t.left, t.rel, t.right)
            matcher = nx.algorithms.isomorphism.GraphMatcher(
                g1, entry[1],
                node_match=lambda a, b: a["colour"] == b["colour"],
                edge_match=lambda a, b: a["colour"] == b["colour"])
            if matcher.subgraph_is_monomorphic():
                return True
        return False


# --------------------------------------------------------------------------
# operations on relations

def identity_relation(processes: Iterable[Process], max_states: int = 50_000) -> LocalizedRelation:
    """Identity triples on everything reachable from ``processes``.

    Reachability follows tau steps and labelled steps, so the result is closed
    under the moves a bisimulation check explores.
    """
    from ..lts import lts_graph

    index = StateIndex()
    out = []
    for p in processes:
        states, _ = lts_graph(p, max_states)
        for s in states:
            par, _ = as_located(s)
            t = LocalizedTriple(s, identity_on(par.web), s)
            _, new = index.add(*triple_signature(t.left, t.rel, t.right), item=t)
            if new:
                out.append(t)
    return LocalizedRelation(out)


def _process_graph(p: Process) -> nx.Graph:
    par, _ = as_located(p)
    return to_networkx(par.web, {l: term_key(c) for l, c in par.components},
                       {e: 1 for e in par.graph.edges})


def compose_localized(s: LocalizedRelation, r: LocalizedRelation, max_isos: int = 5040) -> LocalizedRelation:
    """``s . r``: triples ``(P, F.phi.E, R)`` for ``(P,E,Q)`` in r, ``(Q',F,R)`` in s.

    The middle processes are matched up to renaming; every isomorphism
    ``phi: Q -> Q'`` contributes a triple.
    """
    by_key: Dict[str, List[LocalizedTriple]] = {}
    for t in s:
        by_key.setdefault(process_key(t.left), []).append(t)
    index = StateIndex()
    out = []
    for t in r:
        q_graph = None
        for u in by_key.get(process_key(t.right), []):
            if as_located(t.right)[1] != as_located(u.left)[1]:
                continue
            if q_graph is None:
                q_graph = _process_graph(t.right)
            for n, phi in enumerate(isomorphisms(q_graph, _process_graph(u.left))):
                if n >= max_isos:
                    break
                fwd: Dict[Location, Set[Location]] = {}
                for b, c in u.rel:
                    fwd.setdefault(b, set()).add(c)
                h = frozenset((a, c) for a, b in t.rel for c in fwd.get(phi[b], ()))
                tri = LocalizedTriple(t.left, h, u.right)
                _, new = index.add(*triple_signature(tri.left, tri.rel, tri.right), item=tri)
                if new:
                    out.append(tri)
    return LocalizedRelation(out)


def is_adapted(c: Iterable[Pair], d: Iterable[Pair], e: Iterable[Pair]) -> bool:
    """``(a,b) in c  <=>  (a,b') in d`` whenever ``(b,b') in e``."""
    c, d = frozenset(c), frozenset(d)
    carrier = {a for a, _ in c} | {a for a, _ in d}
    for b, b2 in e:
        for a in carrier:
            if ((a, b) in c) != ((a, b2) in d):
                return False
    return True


RelSpec = Union[Iterable[Pair], Callable[[LocalizedTriple], Iterable[Pair]]]


def _resolve(spec: RelSpec, t: LocalizedTriple, s_web, other_web) -> Relation:
    pairs = spec(t) if callable(spec) else spec
    return frozenset((a, b) for a, b in pairs if a in s_web and b in other_web)


def compose_parallel(s: Process, p: Process, c: Iterable[Pair]) -> Tuple[Process, Dict[Location, Location]]:
    """``S (+)_C P`` with the locations of S renamed above those of P.

    Returns the composition and the renaming applied to S.
    """
    sp, sn = as_located(s)
    pp, pn = as_located(p)
    start = max(pp.web, default=0) + 1
    ren = {l: start + i for i, l in enumerate(sorted(sp.web))}
    s2 = rename_locations(sp, ren)
    graph = gplus(s2.graph, pp.graph, [(ren[a], b) for a, b in c])
    comps = dict(s2.components)
    comps.update(pp.components)
    return wrap_restrictions(Par.of(graph, comps), sn | pn), ren


def parallel_extension(r: LocalizedRelation, s: Process, c: RelSpec, d: RelSpec) -> LocalizedRelation:
    """Triples ``(S (+)_C P, Id_S u E, S (+)_D Q)`` for every ``(P,E,Q)`` in r.

    ``c`` and ``d`` are relations from web(S) to the webs of the left and right
    processes, or callables computing them per triple; fixed relations are
    restricted to the webs of each triple.  Raises NotAdapted when some
    ``(C, D, E)`` is not adapted.
    """
    sw = as_located(s)[0].web
    out = []
    for t in r:
        cl = _resolve(c, t, sw, as_located(t.left)[0].web)
        dl = _resolve(d, t, sw, as_located(t.right)[0].web)
        if not is_adapted(cl, dl, t.rel):
            raise NotAdapted(f"(C, D, E) is not adapted for triple {process_key(t.left)} / {process_key(t.right)}")
        left, ren_l = compose_parallel(s, t.left, cl)
        right, ren_r = compose_parallel(s, t.right, dl)
        rel = {(ren_l[x], ren_r[x]) for x in sw} | set(t.rel)
        out.append(LocalizedTriple(left, rel, right))
    return LocalizedRelation(out)
