"""Internal reduction: redexes, one-step reduction with residuals, closures.

A step fires two coherent components whose unfolded guarded sums carry dual
prefixes ``f`` and ``co f``.  Both vertices are replaced by the parallel
compositions of their prefix arguments; the i-th argument on one side may only
talk to the i-th argument on the other side, and everything else inherits the
coherence of the vertex it came from.  The residual function maps every
location of the reduct back to the location of the source it descends from.

Freshly spawned locations are numbered from ``max(web) + 1`` upwards, first the
arguments of the plain side, then those of the co side, which keeps reduction
deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import InvalidRedex, OpenProcess, StateSpaceExceeded, UnsupportedRestriction
from .locgraph import LocGraph, Location, StateIndex
from .syntax import (Par, Process, Restrict, Symbol, Var, as_located, cansum, pretty, summands,
                     term_key, wrap_restrictions)

DEFAULT_MAX_STATES = 50_000


class Residual:
    """Total map from the web of a target process to the web of a source."""

    __slots__ = ("mapping",)

    def __init__(self, mapping: Mapping[Location, Location]):
        self.mapping = dict(mapping)

    @classmethod
    def identity(cls, web: Iterable[Location]) -> "Residual":
        return cls({l: l for l in web})

    def __call__(self, loc: Location) -> Location:
        return self.mapping[loc]

    def __getitem__(self, loc: Location) -> Location:
        return self.mapping[loc]

    def after(self, inner: "Residual") -> "Residual":
        """``self o inner``: first ``inner``, then ``self``."""
        return Residual({l: self.mapping[m] for l, m in inner.mapping.items()})

    def domain(self) -> frozenset:
        return frozenset(self.mapping)

    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.mapping.items())

    def __eq__(self, other):
        return isinstance(other, Residual) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __repr__(self):
        return f"Residual({dict(sorted(self.mapping.items()))})"


@dataclass(frozen=True)
class Redex:
    p: Location
    q: Location
    symbol: Symbol  # the plain polarity, fired at p
    summand_p: int
    summand_q: int


@dataclass(frozen=True)
class Step:
    source: Process
    redex: Redex
    reduct: Process
    residual: Residual
    spawned_p: Tuple[frozenset, ...]
    spawned_q: Tuple[frozenset, ...]


def located_arguments(args: Sequence[Process], next_id: Location) -> Tuple[List[Par], Location]:
    """Place every prefix argument on fresh locations starting at ``next_id``."""
    out = []
    for a in args:
        if isinstance(a, Var):
            raise OpenProcess(f"free variable {a.name} reached an active position")
        if isinstance(a, Restrict):
            raise UnsupportedRestriction("restriction inside a prefix argument has no reduction semantics")
        if isinstance(a, Par):
            locs = sorted(a.web)
            mapping = {l: next_id + k for k, l in enumerate(locs)}
            next_id += len(locs)
            out.append(Par.of(a.graph.relabel(mapping), {mapping[l]: c for l, c in a.components}))
        else:
            out.append(Par.of(LocGraph.build([next_id]), {next_id: a}))
            next_id += 1
    return out, next_id


def next_location(par: Par) -> Location:
    return max(par.web, default=0) + 1


def unfolded_summands(par: Par, loc: Location):
    comp = par[loc]
    if isinstance(comp, Var):
        raise OpenProcess(f"free variable {comp.name} sits at location {loc}")
    return summands(cansum(comp))


def enumerate_redexes(p: Process) -> List[Redex]:
    """All redexes of ``p``, each once, with the plain side first."""
    par, _ = as_located(p)
    table = {l: unfolded_summands(par, l) for l in sorted(par.web)}
    out = []
    for p_ in sorted(par.web):
        for i, (sym, _) in enumerate(table[p_]):
            if sym.co:
                continue
            for q_ in sorted(par.graph.neighbours(p_)):
                for j, (sym_q, _) in enumerate(table[q_]):
                    if sym_q == sym.dual():
                        out.append(Redex(p_, q_, sym, i, j))
    return out


def step(p: Process, r: Redex) -> Step:
    """Fire redex ``r`` of ``p``."""
    par, names = as_located(p)
    if r.p not in par.web or r.q not in par.web or not par.coherent(r.p, r.q):
        raise InvalidRedex(f"{r} does not name two coherent locations")
    sp, sq = unfolded_summands(par, r.p), unfolded_summands(par, r.q)
    try:
        sym_p, args_p = sp[r.summand_p]
        sym_q, args_q = sq[r.summand_q]
    except IndexError:
        raise InvalidRedex(f"{r} names a missing summand") from None
    if sym_p != r.symbol or sym_q != r.symbol.dual() or sym_p.co:
        raise InvalidRedex(f"{r} does not select dual prefixes")
    if len(args_p) != len(args_q):
        raise InvalidRedex(f"arity mismatch between {sym_p} and {sym_q}")

    ps, nxt = located_arguments(args_p, next_location(par))
    qs, _ = located_arguments(args_q, nxt)
    p_side = frozenset().union(*(x.web for x in ps))
    q_side = frozenset().union(*(x.web for x in qs))
    spawned = p_side | q_side
    rest = par.web - {r.p, r.q}
    new_web = rest | spawned

    lam = {l: l for l in rest}
    lam.update({l: r.p for l in p_side})
    lam.update({l: r.q for l in q_side})

    edges = set()
    for x in ps + qs:
        edges.update(x.graph.edges)
    for x, y in zip(ps, qs):
        edges.update(frozenset((u, v)) for u in x.web for v in y.web)
    ordered = sorted(new_web)
    for k, u in enumerate(ordered):
        for v in ordered[k + 1:]:
            if u in spawned and v in spawned:
                continue
            if lam[u] != lam[v] and par.coherent(lam[u], lam[v]):
                edges.add(frozenset((u, v)))

    comps = {l: par[l] for l in rest}
    for x in ps + qs:
        comps.update(x.components)
    reduct = wrap_restrictions(Par.of(LocGraph(frozenset(new_web), frozenset(edges)), comps), names)
    return Step(p, r, reduct, Residual(lam),
                tuple(x.web for x in ps), tuple(x.web for x in qs))


def successors(p: Process) -> List[Step]:
    return [step(p, r) for r in enumerate_redexes(p)]


def is_stuck(p: Process) -> bool:
    return not enumerate_redexes(p)


def is_empty(p: Process) -> bool:
    par, _ = as_located(p)
    return not par.web


# --------------------------------------------------------------------------
# closures

def _canon_label(x) -> str:
    if isinstance(x, (set, frozenset)):
        return repr(tuple(sorted(x, key=repr)))
    if isinstance(x, tuple):
        return "(" + ",".join(_canon_label(y) for y in x) + ")"
    return repr(x)


def state_signature(p: Process, labels: Optional[Mapping[Location, Hashable]] = None):
    """Arguments for :meth:`StateIndex.add` describing ``p`` (plus vertex labels)."""
    par, names = as_located(p)
    colours = {}
    for l, c in par.components:
        k = term_key(c)
        colours[l] = k if labels is None else f"{k}@{_canon_label(labels[l])}"
    edges = {e: 1 for e in par.graph.edges}
    return tuple(sorted(names)), par.web, colours, edges


@dataclass
class ClosureEntry:
    process: Process
    residual: Residual  # web(process) -> web(origin)
    labels: Dict[Location, Hashable]
    depth: int


@dataclass
class Closure:
    entries: List[ClosureEntry]
    complete: bool


def labelled_closure(p: Process, labels: Optional[Mapping[Location, Hashable]] = None,
                     bound: Optional[int] = None, max_states: int = DEFAULT_MAX_STATES) -> Closure:
    """Reflexive-transitive tau closure, deduplicated up to labelled alpha-equivalence.

    Every location carries a label, pulled back along residuals at each step;
    two reducts are identified when an isomorphism preserves components and
    labels.  With the default labels (each location labelled by itself) this
    identifies exactly the pairs (reduct, composed residual) that agree up to
    renaming.  ``complete`` is False when ``bound`` cut off some reduct.
    """
    par, _ = as_located(p)
    if labels is None:
        labels = {l: l for l in par.web}
    labels = dict(labels)
    index = StateIndex()
    root = ClosureEntry(p, Residual.identity(par.web), labels, 0)
    index.add(*state_signature(p, labels), item=root)
    queue = deque([root])
    complete = True
    while queue:
        e = queue.popleft()
        cutoff = bound is not None and e.depth >= bound
        for st in successors(e.process):
            new_labels = {l: e.labels[m] for l, m in st.residual.mapping.items()}
            if cutoff:
                if index.find(*state_signature(st.reduct, new_labels)) is None:
                    complete = False
                continue
            entry = ClosureEntry(st.reduct, e.residual.after(st.residual), new_labels, e.depth + 1)
            _, new = index.add(*state_signature(st.reduct, new_labels), item=entry)
            if new:
                if len(index) > max_states:
                    raise StateSpaceExceeded(max_states)
                queue.append(entry)
    return Closure(list(index.items), complete)


def tau_closure(p: Process, bound: int, max_states: int = DEFAULT_MAX_STATES) -> List[Tuple[Process, Residual]]:
    """Reducts of ``p`` within ``bound`` steps, each with every distinct residual."""
    return [(e.process, e.residual) for e in labelled_closure(p, None, bound, max_states).entries]


# --------------------------------------------------------------------------
# reduction graphs (states up to alpha-equivalence, residuals forgotten)

@dataclass
class ReductionGraph:
    states: List[Process]
    edges: List[Tuple[int, int, Redex]]
    depth: List[int]
    parent: List[Optional[Tuple[int, Redex]]]
    complete: bool
    found: Optional[int] = None
    frontier: Set[int] = field(default_factory=set)  # states whose successors were not all recorded

    def successors(self, i: int) -> List[int]:
        return sorted({d for s, d, _ in self.edges if s == i})

    def adjacency(self) -> List[List[int]]:
        adj: List[set] = [set() for _ in self.states]
        for s, d, _ in self.edges:
            adj[s].add(d)
        return [sorted(a) for a in adj]

    def path_to(self, i: int) -> List[Redex]:
        path = []
        while self.parent[i] is not None:
            i, r = self.parent[i]
            path.append(r)
        return path[::-1]

    def to_dot(self, name: str = "reductions") -> str:
        lines = [f'digraph "{name}" {{']
        for i, s in enumerate(self.states):
            label = pretty(s).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  s{i} [label="{i}: {label}"];')
        for s, d, r in self.edges:
            lines.append(f'  s{s} -> s{d} [label="{r.symbol.name} @{r.p},{r.q}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def explore(p: Process, bound: Optional[int] = None, max_states: int = DEFAULT_MAX_STATES,
            stop: Optional[Callable[[Process], bool]] = None) -> ReductionGraph:
    """Breadth-first reduction graph of ``p`` up to alpha-equivalence.

    Stops early as soon as a state satisfies ``stop`` (recorded in ``found``).
    Raises StateSpaceExceeded past ``max_states`` states.
    """
    index = StateIndex()
    index.add(*state_signature(p), item=0)
    g = ReductionGraph([p], [], [0], [None], True)
    if stop is not None and stop(p):
        g.found = 0
        return g
    queue = deque([0])
    while queue:
        i = queue.popleft()
        cur = g.states[i]
        cutoff = bound is not None and g.depth[i] >= bound
        for st in successors(cur):
            sig = state_signature(st.reduct)
            if cutoff:
                j = index.find(*sig)
                if j is None:
                    g.complete = False
                    g.frontier.add(i)
                else:
                    g.edges.append((i, j, st.redex))
                continue
            j, new = index.add(*sig, item=len(g.states))
            if new:
                if len(index) > max_states:
                    raise StateSpaceExceeded(max_states)
                g.states.append(st.reduct)
                g.depth.append(g.depth[i] + 1)
                g.parent.append((i, st.redex))
                queue.append(j)
                if stop is not None and stop(st.reduct):
                    g.edges.append((i, j, st.redex))
                    g.found = j
                    g.complete = False
                    g.frontier.update(queue)
                    g.frontier.add(i)
                    return g
            g.edges.append((i, j, st.redex))
    return g
