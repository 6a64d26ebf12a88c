"""Refuting weak barbed congruence by searching Y-contexts."""
from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from ..errors import UnsupportedRestriction
from ..locgraph import LocGraph
from ..reduction import DEFAULT_MAX_STATES
from ..syntax import (EMPTY, Par, Process, Prefix, Signature, Sum, Symbol, Var, pretty,
                      substitute_var, symbols_of, term_key)
from ..verdict import Result, Verdict
from .barbed import barbed_bisimilar

HOLE = "Y"


def _key(t: Process) -> str:
    return term_key(t, (), None)


def _full(*comps: Process) -> Par:
    locs = list(range(1, len(comps) + 1))
    return Par.of(LocGraph.complete(locs), dict(zip(locs, comps)))


class ContextGrammar:
    """Closed terms and Y-contexts over a signature, enumerated by exact size.

    Size counts every syntax node, the empty composition included, so
    ``Y | co f.(eps, co g.(a.(eps), eps))`` has size 8.  Closed terms use
    prefixes, binary sums and ``eps``; a context is ``Y``, a prefix with one
    context argument (optionally summed with a closed guarded sum), or a full
    parallel composition of ``Y`` or a prefix context with closed guarded sums.
    """

    def __init__(self, arities: Mapping[str, int]):
        self.symbols = [Symbol(n, co) for n in sorted(arities) for co in (False, True)]
        self.arity = dict(arities)
        self._gs: Dict[int, List[Process]] = {}
        self._ctx: Dict[int, List[Process]] = {}

    # closed terms -------------------------------------------------------
    def args(self, n: int) -> List[Process]:
        out = [EMPTY] if n == 1 else []
        return out + self.guarded(n)

    def guarded(self, n: int) -> List[Process]:
        if n in self._gs:
            return self._gs[n]
        out: List[Process] = []
        for sym in self.symbols:
            k = self.arity[sym.name]
            for parts in _compositions(n - 1, k):
                for args in itertools.product(*(self.args(m) for m in parts)):
                    out.append(Prefix(sym, args))
        # right-nested sums with summands in key order
        for m in range(1, n - 1):
            for left in self.guarded(m):
                if isinstance(left, Sum):
                    continue
                for right in self.guarded(n - 1 - m):
                    first = right.left if isinstance(right, Sum) else right
                    if _key(left) <= _key(first):
                        out.append(Sum(left, right))
        self._gs[n] = out
        return out

    def closed_multisets(self, n: int, count_min: int = 1) -> Iterator[List[Process]]:
        """Multisets of closed guarded sums with total size ``n``."""

        def go(remaining: int, min_key: str) -> Iterator[List[Process]]:
            if remaining == 0:
                yield []
                return
            for m in range(1, remaining + 1):
                for g in self.guarded(m):
                    k = _key(g)
                    if k < min_key:
                        continue
                    for rest in go(remaining - m, k):
                        yield [g] + rest

        for ms in go(n, ""):
            if len(ms) >= count_min:
                yield ms

    # contexts -------------------------------------------------------------
    def guarded_contexts(self, n: int) -> List[Process]:
        """Contexts that are guarded sums (the hole sits under a prefix)."""
        out: List[Process] = []
        for sym in self.symbols:
            k = self.arity[sym.name]
            for hole_pos in range(k):
                for parts in _compositions(n - 1, k):
                    pools = [self.contexts(m) if i == hole_pos else self.args(m) for i, m in enumerate(parts)]
                    for args in itertools.product(*pools):
                        out.append(Prefix(sym, args))
        for m in range(2, n - 1):
            for c in self.guarded_contexts(m):
                if isinstance(c, Sum):
                    continue
                for g in self.guarded(n - 1 - m):
                    out.append(Sum(c, g))
        return out

    def contexts(self, n: int) -> List[Process]:
        if n in self._ctx:
            return self._ctx[n]
        out: List[Process] = []
        if n == 1:
            out.append(Var(HOLE))
        # parallel contexts first: they are the usual distinguishers
        for m in range(1, n - 1):
            heads = [Var(HOLE)] if m == 1 else self.guarded_contexts(m)
            for head in heads:
                for rest in self.closed_multisets(n - 1 - m):
                    out.append(_full(head, *rest))
        out.extend(self.guarded_contexts(n))
        seen, uniq = set(), []
        for c in out:
            k = _key(c)
            if k not in seen:
                seen.add(k)
                uniq.append(c)
        self._ctx[n] = uniq
        return uniq

    def enumerate(self, max_size: int) -> Iterator[Tuple[int, Process]]:
        for n in range(1, max_size + 1):
            for c in self.contexts(n):
                yield n, c


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive sizes."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def fill(context: Process, p: Process) -> Process:
    """``context[p/Y]``."""
    return substitute_var(context, p, HOLE)


def refute_congruence(p: Process, q: Process, max_context_size: int, bound: Optional[int] = None,
                      signature: Optional[Signature] = None, max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Search for a Y-context telling ``p`` and ``q`` apart by weak barbed bisimilarity.

    Contexts are built from the symbols of ``p``, ``q`` and ``signature`` and
    tried in order of size.  Returns No with the first distinguishing context,
    otherwise Unknown: the search can never establish congruence.
    """
    arities = dict(symbols_of(p))
    arities.update(symbols_of(q))
    if signature is not None:
        arities.update(signature.arities)
    grammar = ContextGrammar(arities)
    tried = skipped = undecided = 0
    for n, ctx in grammar.enumerate(max_context_size):
        try:
            left, right = fill(ctx, p), fill(ctx, q)
        except UnsupportedRestriction:
            skipped += 1
            continue
        tried += 1
        v = barbed_bisimilar(left, right, bound, max_states)
        if v.no:
            return Verdict(Result.NO, {"context": pretty(ctx), "size": n, "contexts_tried": tried,
                                       "barbed": v.witness})
        if v.unknown:
            undecided += 1
    return Verdict(Result.UNKNOWN, {"contexts_tried": tried, "skipped": skipped, "undecided": undecided,
                                    "max_context_size": max_context_size})
