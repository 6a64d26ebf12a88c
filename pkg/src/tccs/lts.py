"""Localized labelled transitions, weak transitions and barbs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Set, Tuple

from .locgraph import Location, StateIndex, disjoint_union, graph_subst
from .reduction import (DEFAULT_MAX_STATES, Residual, _canon_label, labelled_closure,
                        located_arguments, next_location, state_signature, unfolded_summands)
from .syntax import Par, Process, Symbol, as_located, wrap_restrictions

DEFAULT_TAU_BOUND = 64


@dataclass(frozen=True)
class LabeledTransition:
    source: Process
    target: Process
    symbol: Symbol
    at: Location
    spawned: Tuple[FrozenSet[Location], ...]
    residual: Residual

    @property
    def arity(self) -> int:
        return len(self.spawned)

    def spawned_index(self, loc: Location) -> int:
        """1-based index of the argument ``loc`` was spawned by, 0 if none."""
        for i, part in enumerate(self.spawned, 1):
            if loc in part:
                return i
        return 0


def _observable(symbol: Symbol, restricted: FrozenSet[str]) -> bool:
    return symbol.name not in restricted


def labeled_transitions(p: Process) -> List[LabeledTransition]:
    """One transition per (location, summand) of the unfolded components."""
    par, names = as_located(p)
    out = []
    for loc in sorted(par.web):
        for sym, args in unfolded_summands(par, loc):
            if not _observable(sym, names):
                continue
            spawned, _ = located_arguments(args, next_location(par))
            h = disjoint_union(*(x.graph for x in spawned))
            comps = {l: c for l, c in par.components if l != loc}
            for x in spawned:
                comps.update(x.components)
            target = wrap_restrictions(Par.of(graph_subst(par.graph, h, loc), comps), names)
            lam = {l: l for l in par.web if l != loc}
            lam.update({l: loc for l in h.web})
            out.append(LabeledTransition(p, target, sym, loc, tuple(x.web for x in spawned), Residual(lam)))
    return out


def barbs(p: Process) -> Set[Symbol]:
    par, names = as_located(p)
    return {sym for loc in par.web for sym, _ in unfolded_summands(par, loc) if _observable(sym, names)}


@dataclass(frozen=True)
class WeakTransition:
    """``source ->*tau (pre) . --symbol@at--> (mid) . ->*tau (post) target``."""

    source: Process
    symbol: Symbol
    at: Location  # in the intermediate state before the visible step
    spawned: Tuple[FrozenSet[Location], ...]  # in the state right after it
    pre_residual: Residual
    mid_residual: Residual
    post_residual: Residual
    target: Process

    @property
    def origin(self) -> Location:
        """Location of ``source`` the visible step descends from."""
        return self.pre_residual(self.at)

    def residual(self) -> Residual:
        return self.pre_residual.after(self.mid_residual).after(self.post_residual)

    def spawned_index(self, loc: Location) -> int:
        """Argument index of ``post_residual(loc)``, 0 if not spawned."""
        m = self.post_residual(loc)
        for i, part in enumerate(self.spawned, 1):
            if m in part:
                return i
        return 0


class WeakTransitionSet(list):
    """List of weak transitions; ``complete`` is False if a bound truncated the search."""

    complete: bool = True


@dataclass
class WeakAnswer:
    target: Process
    labels: Dict[Location, Hashable]  # per target location: (pulled-back label, spawned index)
    origin_label: Hashable
    transition: WeakTransition


def weak_answers(p: Process, symbol: Symbol, labels: Optional[Mapping[Location, Hashable]] = None,
                 bound: Optional[int] = DEFAULT_TAU_BOUND, max_states: int = DEFAULT_MAX_STATES):
    """Weak ``symbol``-transitions of ``p`` up to labelled alpha-equivalence.

    ``labels`` tag the locations of ``p``; each target location gets the pair
    (tag of the source location it descends from, index of the argument it was
    spawned by or 0).  Answers are identified when their targets agree up to a
    label-preserving isomorphism and the visible steps fire at equally tagged
    locations.  Returns ``(answers, complete)``.
    """
    par, _ = as_located(p)
    if labels is None:
        labels = {l: l for l in par.web}
    pre = labelled_closure(p, labels, bound, max_states)
    complete = pre.complete
    index = StateIndex()
    out: List[WeakAnswer] = []
    for e in pre.entries:
        for t in labeled_transitions(e.process):
            if t.symbol != symbol:
                continue
            mid_labels = {l: (e.labels[m], t.spawned_index(l)) for l, m in t.residual.mapping.items()}
            origin_label = e.labels[t.at]
            post = labelled_closure(t.target, mid_labels, bound, max_states)
            complete = complete and post.complete
            for f in post.entries:
                names, web, colours, edges = state_signature(f.process, f.labels)
                _, new = index.add((names, _canon_label(origin_label)), web, colours, edges, None)
                if not new:
                    continue
                wt = WeakTransition(p, symbol, t.at, t.spawned, e.residual, t.residual, f.residual, f.process)
                out.append(WeakAnswer(f.process, f.labels, origin_label, wt))
    return out, complete


def weak_transitions(p: Process, symbol: Symbol, bound: int = DEFAULT_TAU_BOUND,
                     max_states: int = DEFAULT_MAX_STATES) -> WeakTransitionSet:
    """All weak ``symbol``-transitions with tau segments of at most ``bound`` steps.

    One entry per distinct target up to renaming of its locations that keeps
    the composed residual, the argument indices and the firing origin.
    """
    answers, complete = weak_answers(p, symbol, None, bound, max_states)
    out = WeakTransitionSet(a.transition for a in answers)
    out.complete = complete
    return out


def lts_graph(p: Process, max_states: int = DEFAULT_MAX_STATES):
    """Reachable states under tau and labelled steps, up to alpha-equivalence.

    Returns ``(states, edges)`` with edges ``(src, dst, label)`` where label is
    ``"tau"`` or the printed symbol.
    """
    from .reduction import successors
    from .errors import StateSpaceExceeded

    index = StateIndex()
    index.add(*state_signature(p), item=p)
    states = [p]
    edges = []
    i = 0
    while i < len(states):
        cur = states[i]
        moves = [("tau", st.reduct) for st in successors(cur)]
        moves += [(str(t.symbol), t.target) for t in labeled_transitions(cur)]
        for label, target in moves:
            j, new = index.add(*state_signature(target), item=target)
            if new:
                if len(states) >= max_states:
                    raise StateSpaceExceeded(max_states)
                states.append(target)
            edges.append((i, j, label))
        i += 1
    return states, edges
