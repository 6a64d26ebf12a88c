"""Weak barbed bisimilarity on finite reduction graphs."""
from __future__ import annotations

from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

from ..errors import StateSpaceExceeded
from ..lts import barbs
from ..reduction import DEFAULT_MAX_STATES, ReductionGraph, explore
from ..syntax import Process, Symbol, pretty
from ..verdict import YES, Result, Verdict


class _Side:
    """A reduction graph with weak reachability and weak barbs per state."""

    def __init__(self, g: ReductionGraph):
        self.g = g
        n = len(g.states)
        self.succ = g.adjacency()
        self.barbs: List[FrozenSet[Symbol]] = [frozenset(barbs(s)) for s in g.states]
        self.reach: List[FrozenSet[int]] = [self._reach_from(i) for i in range(n)]
        self.weak_barbs = [frozenset().union(*(self.barbs[j] for j in self.reach[i])) for i in range(n)]
        # reach touches a state whose successors are not all known
        self.open = [bool(self.reach[i] & g.frontier) for i in range(n)]

    def _reach_from(self, i: int) -> FrozenSet[int]:
        seen = {i}
        stack = [i]
        while stack:
            for j in self.succ[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return frozenset(seen)

    def path(self, i: int) -> List[str]:
        return [f"{r.symbol.name}@{r.p},{r.q}" for r in self.g.path_to(i)]


def _solve(a: _Side, b: _Side, optimistic: bool) -> Set[Tuple[int, int]]:
    """Largest set of pairs satisfying both clauses in both directions."""

    def barb_ok(x: int, y: int, s: _Side, t: _Side) -> bool:
        if s.barbs[x] <= t.weak_barbs[y]:
            return True
        return optimistic and t.open[y]

    good = set()
    for x in range(len(a.g.states)):
        for y in range(len(b.g.states)):
            if not optimistic and (x in a.g.frontier or y in b.g.frontier):
                continue
            if barb_ok(x, y, a, b) and barb_ok(y, x, b, a):
                good.add((x, y))
    changed = True
    while changed:
        changed = False
        for x, y in list(good):
            ok = True
            if not (optimistic and x in a.g.frontier):
                for x2 in a.succ[x]:
                    if not any((x2, y2) in good for y2 in b.reach[y]) and not (optimistic and b.open[y]):
                        ok = False
                        break
            if ok and not (optimistic and y in b.g.frontier):
                for y2 in b.succ[y]:
                    if not any((x2, y2) in good for x2 in a.reach[x]) and not (optimistic and a.open[x]):
                        ok = False
                        break
            if not ok:
                good.discard((x, y))
                changed = True
    return good


def _witness(a: _Side, b: _Side, good: Set[Tuple[int, int]]) -> Dict[str, Any]:
    for holder, s, t in (("left", a, b), ("right", b, a)):
        if t.open[0]:
            continue
        extra = sorted(s.weak_barbs[0] - t.weak_barbs[0], key=Symbol.sort_key)
        if extra:
            barb = extra[0]
            at = next(j for j in sorted(s.reach[0], key=lambda j: s.g.depth[j]) if barb in s.barbs[j])
            return {"kind": "barb", "barb": str(barb), "holder": holder, "path": s.path(at),
                    "state": pretty(s.g.states[at])}
    # the weak barb sets agree: some reduction cannot be matched
    for x2 in a.succ[0]:
        if not any((x2, y2) in good for y2 in b.reach[0]):
            return {"kind": "reduction", "side": "left", "path": a.path(x2), "state": pretty(a.g.states[x2])}
    for y2 in b.succ[0]:
        if not any((x2, y2) in good for x2 in a.reach[0]):
            return {"kind": "reduction", "side": "right", "path": b.path(y2), "state": pretty(b.g.states[y2])}
    return {"kind": "barb", "barb": None, "holder": None, "path": [], "state": None}


def barbed_bisimilar(p: Process, q: Process, bound: Optional[int] = None,
                     max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Weak barbed bisimilarity of ``p`` and ``q``.

    Both reduction graphs are explored up to ``bound`` steps (unbounded by
    default).  A No verdict carries either a barb reachable on one side only,
    with the path reaching it, or a reduction the other side cannot match.
    """
    try:
        a = _Side(explore(p, bound, max_states))
        b = _Side(explore(q, bound, max_states))
    except StateSpaceExceeded as exc:
        return Verdict(Result.UNKNOWN, {"reason": str(exc)})
    if (0, 0) in _solve(a, b, optimistic=False):
        return YES
    opt = _solve(a, b, optimistic=True)
    if (0, 0) not in opt:
        w = _witness(a, b, opt)
        w["states"] = [len(a.g.states), len(b.g.states)]
        return Verdict(Result.NO, w)
    return Verdict(Result.UNKNOWN, {"reason": "bound exhausted", "states": [len(a.g.states), len(b.g.states)]})
