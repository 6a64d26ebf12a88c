"""Top-down tree automata and recognition by interaction.

An automaton state X is encoded as a recursive guarded sum offering one
prefix per transition out of X; a tree is encoded with co-prefixes.  Putting
the two side by side, the tree is accepted from X exactly when the composition
can reduce to the empty process.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import ArityMismatch, UnknownState
from .locgraph import LocGraph
from .reduction import DEFAULT_MAX_STATES, explore, is_empty
from .syntax import Fix, Par, Prefix, Process, Symbol, Var, sum_of
from .verdict import Result, Verdict

Transition = Tuple[str, str, Tuple[str, ...]]  # (state, symbol, target states)


@dataclass(frozen=True)
class Tree:
    symbol: str
    children: Tuple["Tree", ...] = ()

    def __post_init__(self):
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    def __str__(self):
        if not self.children:
            return self.symbol
        return f"{self.symbol}({','.join(map(str, self.children))})"

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    def arities(self) -> Dict[str, int]:
        out = {self.symbol: len(self.children)}
        for c in self.children:
            for k, v in c.arities().items():
                if out.setdefault(k, v) != v:
                    raise ArityMismatch(f"{k} used with arities {out[k]} and {v}")
        return out


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(.))")


def parse_tree(text: str) -> Tree:
    """Parse term syntax such as ``f(a, f(a,a))``; ``a()`` and ``a`` are the same leaf."""
    toks = [(m.group(1), m.group(2)) for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = 0

    def node() -> Tree:
        nonlocal pos
        if pos >= len(toks) or toks[pos][0] is None:
            raise ValueError(f"expected a symbol in tree {text!r}")
        name = toks[pos][0]
        pos += 1
        kids: List[Tree] = []
        if pos < len(toks) and toks[pos][1] == "(":
            pos += 1
            if pos < len(toks) and toks[pos][1] == ")":
                pos += 1
                return Tree(name)
            while True:
                kids.append(node())
                if pos < len(toks) and toks[pos][1] == ",":
                    pos += 1
                    continue
                if pos < len(toks) and toks[pos][1] == ")":
                    pos += 1
                    break
                raise ValueError(f"expected ',' or ')' in tree {text!r}")
        return Tree(name, tuple(kids))

    t = node()
    if pos != len(toks):
        raise ValueError(f"trailing input in tree {text!r}")
    t.arities()
    return t


@dataclass
class TreeAutomaton:
    states: FrozenSet[str]
    transitions: FrozenSet[Transition]
    arities: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.states = frozenset(self.states)
        self.transitions = frozenset((x, f, tuple(ys)) for x, f, ys in self.transitions)
        for x, f, ys in self.transitions:
            for s in (x,) + ys:
                if s not in self.states:
                    raise UnknownState(f"state {s} of transition ({x}, {f}, {ys}) is not declared")
            n = self.arities.setdefault(f, len(ys))
            if n != len(ys):
                raise ArityMismatch(f"{f} has arity {n} but a transition gives it {len(ys)} targets")

    @classmethod
    def of(cls, transitions: Iterable[Transition], states: Iterable[str] = ()) -> "TreeAutomaton":
        transitions = [(x, f, tuple(ys)) for x, f, ys in transitions]
        all_states = set(states) | {x for x, _, _ in transitions} | {y for _, _, ys in transitions for y in ys}
        return cls(frozenset(all_states), frozenset(transitions))

    def outgoing(self, x: str) -> List[Transition]:
        """Transitions from ``x`` ordered by symbol, then target states."""
        self._check(x)
        return sorted((t for t in self.transitions if t[0] == x), key=lambda t: (t[1], t[2]))

    def _check(self, x: str) -> None:
        if x not in self.states:
            raise UnknownState(f"{x} is not a state of the automaton")


def recognizes_oracle(a: TreeAutomaton, x: str, t: Tree) -> bool:
    """Classical top-down membership ``t in L(A, X)``."""
    a._check(x)
    memo: Dict[Tuple[str, int], bool] = {}

    def rec(state: str, node: Tree) -> bool:
        key = (state, id(node))
        if key not in memo:
            memo[key] = any(
                f == node.symbol and len(ys) == len(node.children)
                and all(rec(y, c) for y, c in zip(ys, node.children))
                for _, f, ys in a.outgoing(state))
        return memo[key]

    return rec(x, t)


def encode_automaton(a: TreeAutomaton, x: str, bound: FrozenSet[str] = frozenset()) -> Process:
    """The closed recursive guarded sum standing for state ``x``.

    States in ``bound`` are already being defined by an enclosing fixpoint
    and are referred to by variable.
    """
    a._check(x)
    if x in bound:
        return Var(x)
    inner = bound | {x}
    body = sum_of(Prefix(Symbol(f), tuple(encode_automaton(a, y, inner) for y in ys))
                  for _, f, ys in a.outgoing(x))
    return Fix(x, body)


def encode_tree(t: Tree) -> Process:
    return Prefix(Symbol(t.symbol, co=True), tuple(encode_tree(c) for c in t.children))


def interaction_process(a: TreeAutomaton, x: str, t: Tree) -> Par:
    """``<A,X> | t`` as a two-location full composition."""
    return Par.of(LocGraph.complete([1, 2]), {1: encode_automaton(a, x), 2: encode_tree(t)})


def default_bound(a: TreeAutomaton, t: Tree) -> int:
    return t.size * max(len(a.transitions), 1) * 4


def recognize_by_interaction(a: TreeAutomaton, x: str, t: Tree, bound: Optional[int] = None,
                             max_states: int = DEFAULT_MAX_STATES) -> Verdict:
    """Yes iff ``<A,X> | t`` reduces to the empty process within ``bound`` steps."""
    a._check(x)
    if bound is None:
        bound = default_bound(a, t)
    g = explore(interaction_process(a, x, t), bound, max_states, stop=is_empty)
    if g.found is not None:
        return Verdict(Result.YES, {"steps": len(g.path_to(g.found)), "states": len(g.states)})
    if g.complete:
        return Verdict(Result.NO, {"reason": "no reachable state is empty", "states": len(g.states),
                                   "stuck_immediately": not g.edges})
    return Verdict(Result.UNKNOWN, {"reason": "bound exhausted", "bound": bound, "states": len(g.states)})


def random_tree(rng: random.Random, arities: Mapping[str, int], max_depth: int) -> Tree:
    """A random tree of depth at most ``max_depth`` (leaves need a constant)."""
    leaves = sorted(s for s, n in arities.items() if n == 0)
    inner = sorted(s for s, n in arities.items() if n > 0)
    if not leaves:
        raise ValueError("the signature needs at least one constant")
    if max_depth <= 1 or not inner or rng.random() < 0.3:
        return Tree(rng.choice(leaves))
    f = rng.choice(inner)
    return Tree(f, tuple(random_tree(rng, arities, max_depth - 1) for _ in range(arities[f])))
