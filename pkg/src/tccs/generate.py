"""Seeded random generators for processes (used by tests, demos and acceptance runs)."""
from __future__ import annotations

import random
from typing import Dict, List, Mapping, Optional, Sequence

from .locgraph import LocGraph
from .syntax import EMPTY, Fix, Par, Prefix, Process, Sum, Symbol, Var, sum_of


def _symbols(arities: Mapping[str, int]) -> List[Symbol]:
    return [Symbol(n, co) for n in sorted(arities) for co in (False, True)]


def random_guarded_sum(rng: random.Random, arities: Mapping[str, int], depth: int,
                       max_summands: int = 2, recursion: float = 0.0, _vars: Sequence[str] = ()) -> Process:
    """A closed canonical guarded sum; with ``recursion`` > 0 some summands loop back.

    Recursive occurrences only appear as whole prefix arguments, so every
    unfolding stays a single location and state spaces stay finite for
    unary symbols.
    """
    syms = _symbols(arities)
    if _vars == () and recursion and rng.random() < recursion:
        var = f"X{depth}"
        body = random_guarded_sum(rng, arities, depth, max_summands, recursion, (var,))
        return Fix(var, body)
    n = rng.randint(1, max_summands)
    terms = []
    for _ in range(n):
        sym = rng.choice(syms)
        args = []
        for _ in range(arities[sym.name]):
            if _vars and rng.random() < 0.4:
                args.append(Var(rng.choice(list(_vars))))
            elif depth <= 0 or rng.random() < 0.35:
                args.append(EMPTY)
            else:
                args.append(random_argument(rng, arities, depth - 1, max_summands, 0.0, _vars))
        terms.append(Prefix(sym, tuple(args)))
    return sum_of(terms)


def random_argument(rng: random.Random, arities: Mapping[str, int], depth: int, max_summands: int = 2,
                    recursion: float = 0.0, _vars: Sequence[str] = ()) -> Process:
    """A prefix argument: a guarded sum, or a small complete composition of them.

    Compositions never mention the enclosing recursion variables: a variable
    under a parallel composition would grow the web on every unfolding.
    """
    if rng.random() < 0.25 and depth > 0:
        k = rng.randint(2, 3)
        comps = [random_guarded_sum(rng, arities, depth - 1, max_summands, recursion, ()) for _ in range(k)]
        return full(*comps)
    return random_guarded_sum(rng, arities, depth, max_summands, recursion, _vars)


def full(*comps: Process) -> Par:
    locs = list(range(1, len(comps) + 1))
    return Par.of(LocGraph.complete(locs), dict(zip(locs, comps)))


def random_process(rng: random.Random, arities: Mapping[str, int], max_components: int = 3, depth: int = 2,
                   edge_prob: float = 0.6, max_summands: int = 2, recursion: float = 0.0) -> Par:
    """A located process on locations 1..n with a random coherence graph."""
    n = rng.randint(1, max_components)
    locs = list(range(1, n + 1))
    edges = [(a, b) for a in locs for b in locs if a < b and rng.random() < edge_prob]
    comps = {l: random_guarded_sum(rng, arities, depth, max_summands, recursion) for l in locs}
    return Par.of(LocGraph.build(locs, edges), comps)


def random_ccs_process(rng: random.Random, names: Sequence[str] = ("a", "b", "c"), max_components: int = 2,
                       depth: int = 2, recursion: float = 0.25) -> Par:
    """A process of the CCS fragment: unary symbols, complete graphs everywhere."""
    arities: Dict[str, int] = {n: 1 for n in names}
    n = rng.randint(1, max_components)
    comps = [random_guarded_sum(rng, arities, depth, 2, recursion) for _ in range(n)]
    return full(*comps)


def reorder_sums(p: Process, rng: Optional[random.Random] = None) -> Process:
    """Reverse (or shuffle) every sum; the result is bisimilar to ``p``."""
    if isinstance(p, Sum):
        terms = []

        def flat(t):
            if isinstance(t, Sum):
                flat(t.left)
                flat(t.right)
            else:
                terms.append(reorder_sums(t, rng))

        flat(p)
        if rng is None:
            terms.reverse()
        else:
            rng.shuffle(terms)
        return sum_of(terms)
    if isinstance(p, Prefix):
        return Prefix(p.symbol, tuple(reorder_sums(a, rng) for a in p.args))
    if isinstance(p, Fix):
        return Fix(p.var, reorder_sums(p.body, rng))
    if isinstance(p, Par):
        return Par.of(p.graph, {l: reorder_sums(c, rng) for l, c in p.components})
    return p


def relabel(p: Par, rng: random.Random) -> Par:
    """Same process on a shuffled set of location names."""
    locs = sorted(p.web)
    new = list(range(1, len(locs) + 1))
    rng.shuffle(new)
    mapping = dict(zip(locs, new))
    return Par.of(p.graph.relabel(mapping), {mapping[l]: c for l, c in p.components})


def mutate(p: Process, rng: random.Random) -> Process:
    """Flip the polarity of one randomly chosen prefix (usually not bisimilar to ``p``)."""
    sites: List[Prefix] = []

    def collect(t: Process) -> None:
        if isinstance(t, Prefix):
            sites.append(t)
        if isinstance(t, Par):
            for _, c in t.components:
                collect(c)
        for c in ((t.left, t.right) if isinstance(t, Sum) else t.args if isinstance(t, Prefix)
                  else (t.body,) if isinstance(t, Fix) else ()):
            collect(c)

    collect(p)
    if not sites:
        return p
    target = rng.choice(sites)

    def go(t: Process) -> Process:
        if t is target:
            return Prefix(t.symbol.dual(), t.args)
        if isinstance(t, Sum):
            return Sum(go(t.left), go(t.right))
        if isinstance(t, Prefix):
            return Prefix(t.symbol, tuple(go(a) for a in t.args))
        if isinstance(t, Fix):
            return Fix(t.var, go(t.body))
        if isinstance(t, Par):
            return Par.of(t.graph, {l: go(c) for l, c in t.components})
        return t

    return go(p)
