"""Graphs over locations and exact canonical labelling.

A :class:`LocGraph` is the communication topology of a parallel composition:
a finite web of integer locations plus a coherence relation stored as a set of
unordered pairs, so that symmetry and irreflexivity hold by construction.

Canonical labelling (used for alpha-equivalence of located processes) is an
individualisation/refinement search: colour refinement, then branching on the
first non-singleton cell, keeping the lexicographically least certificate.
Graphs are split into connected components first and twins are pruned, which
keeps the search cheap at the sizes met in practice.
"""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from itertools import count
from typing import Any, Dict, Hashable, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from .errors import RelationOutOfRange, VertexNotInWeb, WebsNotDisjoint, WebTooLarge

Location = int

_fresh_lock = threading.Lock()
_fresh_counter = count(1_000_000)


def fresh_location() -> Location:
    """Return a location never handed out before (thread safe)."""
    with _fresh_lock:
        return next(_fresh_counter)


def fresh_locations(n: int) -> List[Location]:
    with _fresh_lock:
        return [next(_fresh_counter) for _ in range(n)]


@dataclass(frozen=True)
class LocGraph:
    web: frozenset
    edges: frozenset  # of frozenset({p, q}), p != q

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"coherence pair {set(e)} is not a pair of distinct locations")
            if not e <= self.web:
                raise RelationOutOfRange(f"edge {sorted(e)} leaves the web {sorted(self.web)}")

    @classmethod
    def build(cls, web: Iterable[Location], edges: Iterable[Tuple[Location, Location]] = ()) -> "LocGraph":
        return cls(frozenset(web), frozenset(frozenset(e) for e in edges))

    @classmethod
    def complete(cls, web: Iterable[Location]) -> "LocGraph":
        web = sorted(web)
        return cls.build(web, [(p, q) for i, p in enumerate(web) for q in web[i + 1:]])

    @classmethod
    def empty(cls) -> "LocGraph":
        return cls(frozenset(), frozenset())

    def coherent(self, p: Location, q: Location) -> bool:
        return frozenset((p, q)) in self.edges

    def neighbours(self, p: Location) -> set:
        return {q for e in self.edges if p in e for q in e if q != p}

    def edge_list(self) -> List[Tuple[Location, Location]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def is_complete(self) -> bool:
        n = len(self.web)
        return len(self.edges) == n * (n - 1) // 2

    def relabel(self, mapping: Mapping[Location, Location]) -> "LocGraph":
        return LocGraph(frozenset(mapping[p] for p in self.web),
                        frozenset(frozenset(mapping[p] for p in e) for e in self.edges))

    def __len__(self):
        return len(self.web)


def graph_subst(g: LocGraph, h: LocGraph, p: Location) -> LocGraph:
    """Replace vertex ``p`` of ``g`` by the whole graph ``h``.

    Vertices of ``h`` inherit every edge ``p`` had in ``g``.
    """
    if p not in g.web:
        raise VertexNotInWeb(f"location {p} is not in the web")
    if g.web & h.web:
        raise WebsNotDisjoint(f"webs share {sorted(g.web & h.web)}")
    edges = {e for e in g.edges if p not in e}
    edges.update(h.edges)
    for q in g.neighbours(p):
        for r in h.web:
            edges.add(frozenset((q, r)))
    return LocGraph((g.web - {p}) | h.web, frozenset(edges))


def gplus(g: LocGraph, h: LocGraph, d: Iterable[Tuple[Location, Location]] = ()) -> LocGraph:
    """``g`` and ``h`` side by side, plus the cross edges listed in ``d``."""
    if g.web & h.web:
        raise WebsNotDisjoint(f"webs share {sorted(g.web & h.web)}")
    edges = set(g.edges) | set(h.edges)
    for p, q in d:
        if p not in g.web or q not in h.web:
            raise RelationOutOfRange(f"pair ({p}, {q}) is not in web(g) x web(h)")
        edges.add(frozenset((p, q)))
    return LocGraph(g.web | h.web, frozenset(edges))


def disjoint_union(*graphs: LocGraph) -> LocGraph:
    out = LocGraph.empty()
    for g in graphs:
        out = gplus(out, g)
    return out


# --------------------------------------------------------------------------
# canonical labelling of vertex- and edge-coloured graphs

Certificate = Tuple[Any, ...]


def _adjacency(vertices, edges: Mapping[frozenset, int]) -> Dict[Hashable, Dict[Hashable, int]]:
    adj: Dict[Hashable, Dict[Hashable, int]] = {v: {} for v in vertices}
    for e, c in edges.items():
        u, v = tuple(e)
        adj[u][v] = c
        adj[v][u] = c
    return adj


def _components(adj) -> List[List[Hashable]]:
    seen, out = set(), []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(comp)
    return out


def _refine(vs, cell, adj):
    ncells = len(set(cell.values()))
    while True:
        sig = {v: (cell[v], tuple(sorted((c, cell[w]) for w, c in adj[v].items())))
               for v in vs}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in vs}
        if len(ranks) == ncells:
            return new
        cell, ncells = new, len(ranks)


def _twin_representatives(members, adj):
    reps: List[Hashable] = []
    for v in members:
        for r in reps:
            if all(adj[v].get(w) == adj[r].get(w) for w in set(adj[v]) | set(adj[r]) if w not in (v, r)):
                break
        else:
            reps.append(v)
    return reps


def _leaf_certificate(vs, cell, adj, colours):
    order = sorted(vs, key=cell.__getitem__)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted((pos[u], pos[w], c) for u in order for w, c in adj[u].items() if pos[u] < pos[w])
    return (tuple(colours[v] for v in order), tuple(edges)), order


class _SearchState:
    def __init__(self):
        self.cert = None
        self.order = None
        self.autos: List[Dict[Hashable, Hashable]] = []

    def leaf(self, cert, order) -> None:
        if self.cert is None or cert < self.cert:
            self.cert, self.order = cert, order
        elif cert == self.cert:
            self.autos.append(dict(zip(self.order, order)))

    def orbits(self, fixed: List[Hashable]) -> Dict[Hashable, Hashable]:
        """Union-find roots under the known automorphisms fixing ``fixed`` pointwise."""
        parent: Dict[Hashable, Hashable] = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for g in self.autos:
            if all(g[f] == f for f in fixed):
                for x, y in g.items():
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[rx] = ry
        return {x: find(x) for x in parent}


def _search(vs, cell, adj, colours, state: _SearchState, fixed: List[Hashable]):
    sizes = Counter(cell.values())
    target = min((c for c, n in sizes.items() if n > 1), default=None)
    if target is None:
        state.leaf(*_leaf_certificate(vs, cell, adj, colours))
        return
    members = [v for v in vs if cell[v] == target]
    reps = _twin_representatives(members, adj)
    if len(reps) == 1:
        # the whole cell is one twin class, so every ordering of it is equivalent
        rank = {v: i for i, v in enumerate(members)}
        split = {w: (cell[w], rank.get(w, -1)) for w in vs}
        _search(vs, _refine(vs, split, adj), adj, colours, state, fixed + members)
        return
    done: List[Hashable] = []
    for v in reps:
        if done:
            # skip v when a known automorphism fixing the path maps it onto an explored branch
            roots = state.orbits(fixed)
            if roots.get(v, v) in {roots.get(u, u) for u in done}:
                continue
        split = {w: 2 * cell[w] + (0 if w == v else 1) for w in vs}
        _search(vs, _refine(vs, split, adj), adj, colours, state, fixed + [v])
        done.append(v)


def _component_certificate(vs, colours, adj):
    distinct = {c: i for i, c in enumerate(sorted({colours[v] for v in vs}))}
    cell = _refine(vs, {v: distinct[colours[v]] for v in vs}, adj)
    state = _SearchState()
    _search(vs, cell, adj, colours, state, [])
    return state.cert, state.order


def canonical_certificate(vertices: Iterable[Hashable], colours: Mapping[Hashable, str],
                          edges: Mapping[frozenset, int], max_size: Optional[int] = None) -> Certificate:
    """Isomorphism-invariant certificate of a coloured graph.

    ``colours`` maps vertices to strings, ``edges`` maps unordered pairs to
    positive integer edge colours.  Two inputs get equal certificates iff there
    is a colour-preserving isomorphism between them.
    """
    if not edges:
        # isolated vertices: the certificate of each is just its colour
        return tuple(sorted(((colours[v],), ()) for v in vertices))
    adj = _adjacency(vertices, edges)
    certs = []
    for comp in _components(adj):
        if max_size is not None and len(comp) > max_size:
            raise WebTooLarge(f"connected component of {len(comp)} vertices exceeds bound {max_size}")
        certs.append(_component_certificate(comp, colours, adj)[0])
    return tuple(sorted(certs))


def canonical_order(vertices: Iterable[Hashable], colours: Mapping[Hashable, str],
                    edges: Mapping[frozenset, int]) -> List[Hashable]:
    """A canonical vertex ordering (components in certificate order)."""
    adj = _adjacency(vertices, edges)
    parts = [_component_certificate(comp, colours, adj) for comp in _components(adj)]
    parts.sort(key=lambda cp: cp[0])
    return [v for _, order in parts for v in order]


def invariant_hash(vertices, colours, edges) -> Tuple[Any, ...]:
    """Cheap isomorphism invariant (stable colour-refinement histogram)."""
    vs = list(vertices)
    adj = _adjacency(vs, edges)
    distinct = {c: i for i, c in enumerate(sorted({colours[v] for v in vs}))}
    cell = _refine(vs, {v: distinct[colours[v]] for v in vs}, adj)
    hist = Counter((cell[v], colours[v], len(adj[v])) for v in vs)
    return tuple(sorted(hist.items())), len(edges)


def to_networkx(vertices, colours, edges) -> nx.Graph:
    g = nx.Graph()
    for v in vertices:
        g.add_node(v, colour=colours[v])
    for e, c in edges.items():
        u, v = tuple(e)
        g.add_edge(u, v, colour=c)
    return g


def isomorphisms(g1: nx.Graph, g2: nx.Graph):
    """Iterate over colour-preserving isomorphisms ``g1 -> g2``."""
    matcher = nx.algorithms.isomorphism.GraphMatcher(
        g1, g2,
        node_match=lambda a, b: a["colour"] == b["colour"],
        edge_match=lambda a, b: a["colour"] == b["colour"])
    return matcher.isomorphisms_iter()


class StateIndex:
    """Deduplicates coloured graphs up to isomorphism.

    Uses exact certificates when every connected component fits under
    ``max_size``; larger graphs fall back to invariant buckets plus pairwise
    isomorphism tests.
    """

    def __init__(self, max_size: int = 64):
        self.max_size = max_size
        self._by_cert: Dict[Any, int] = {}
        self._buckets: Dict[Any, List[Tuple[nx.Graph, int]]] = {}
        self.items: List[Any] = []

    def __len__(self):
        return len(self.items)

    def find(self, prefix: Hashable, vertices, colours, edges) -> Optional[int]:
        """Index of an isomorphic graph already stored, else None."""
        vertices = list(vertices)
        try:
            key = (prefix, canonical_certificate(vertices, colours, edges, self.max_size))
        except WebTooLarge:
            key = None
        if key is not None:
            return self._by_cert.get(key)
        g = to_networkx(vertices, colours, edges)
        for other, idx in self._buckets.get((prefix, invariant_hash(vertices, colours, edges)), []):
            if next(isomorphisms(g, other), None) is not None:
                return idx
        return None

    def add(self, prefix: Hashable, vertices, colours, edges, item: Any) -> Tuple[int, bool]:
        """Return ``(index, is_new)``; ``prefix`` is compared by equality."""
        vertices = list(vertices)
        try:
            key = (prefix, canonical_certificate(vertices, colours, edges, self.max_size))
        except WebTooLarge:
            key = None
        if key is not None:
            if key in self._by_cert:
                return self._by_cert[key], False
            self._by_cert[key] = len(self.items)
            self.items.append(item)
            return len(self.items) - 1, True
        bucket_key = (prefix, invariant_hash(vertices, colours, edges))
        g = to_networkx(vertices, colours, edges)
        bucket = self._buckets.setdefault(bucket_key, [])
        for other, idx in bucket:
            if next(isomorphisms(g, other), None) is not None:
                return idx, False
        bucket.append((g, len(self.items)))
        self.items.append(item)
        return len(self.items) - 1, True


# --------------------------------------------------------------------------
# canonical forms of processes

def canonical_form(p, max_web: int = 12):
    """Alpha-invariant key of a located canonical process.

    Equal keys iff the processes are alpha-equivalent: a graph isomorphism
    that maps every component to an alpha-equivalent component.
    """
    from .syntax import process_key

    return process_key(p, max_web=max_web)


def process_to_dot(p, name: str = "process") -> str:
    """DOT rendering of a located process: one node per location."""
    from .syntax import as_located, pretty

    par, restricted = as_located(p)
    lines = [f"graph {_dot_id(name)} {{"]
    if restricted:
        lines.append(f'  label="restricted: {", ".join(sorted(restricted))}";')
    for loc, comp in par.components:
        label = pretty(comp).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  l{loc} [label="{loc}: {label}"];')
    for p_, q_ in par.graph.edge_list():
        lines.append(f"  l{p_} -- l{q_};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_id(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'
