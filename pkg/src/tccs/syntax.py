"""Signatures, the process AST, substitution, canonicity and guarded-sum unfolding.

Processes are immutable.  Variables are plain strings, locations are ints.
A guarded sum (or a fixpoint of one) used where a located process is expected,
e.g. as a prefix argument, stands for the one-location parallel composition
holding it; :func:`as_located` performs that coercion.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .errors import (ArityMismatch, NonTermination, NotGuardedSum, NotRecursiveGuardedSum,
                     UndeclaredSymbol, UnsupportedRestriction)
from .locgraph import LocGraph, Location, canonical_certificate, fresh_locations, graph_subst

CANSUM_DEPTH = 10_000


# --------------------------------------------------------------------------
# signatures

@dataclass(frozen=True)
class Symbol:
    """A prefix symbol: a signature name with a polarity bit."""

    name: str
    co: bool = False

    def dual(self) -> "Symbol":
        return Symbol(self.name, not self.co)

    def __str__(self):
        return f"co {self.name}" if self.co else self.name

    def sort_key(self):
        return (self.name, self.co)


@dataclass
class Signature:
    arities: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, n in self.arities.items():
            if n < 0:
                raise ValueError(f"negative arity for {name}")

    def declare(self, name: str, arity: int) -> None:
        if name in self.arities and self.arities[name] != arity:
            raise ArityMismatch(f"{name} declared with arities {self.arities[name]} and {arity}")
        if arity < 0:
            raise ValueError(f"negative arity for {name}")
        self.arities[name] = arity

    def arity(self, name: str) -> int:
        try:
            return self.arities[name]
        except KeyError:
            raise UndeclaredSymbol(f"symbol {name!r} is not declared") from None

    def check(self, symbol: Symbol, nargs: int) -> None:
        n = self.arity(symbol.name)
        if n != nargs:
            raise ArityMismatch(f"{symbol} has arity {n} but was given {nargs} argument(s)")

    def symbols(self) -> List[Symbol]:
        return [Symbol(n, co) for n in sorted(self.arities) for co in (False, True)]

    def __contains__(self, name):
        return name in self.arities


# --------------------------------------------------------------------------
# process AST

class Process:
    """Base class of process terms."""

    __slots__ = ()

    def __str__(self):
        return pretty(self)


def _memo_field():
    return field(default_factory=dict, init=False, repr=False, compare=False, hash=False)


@dataclass(frozen=True, eq=True)
class Var(Process):
    name: str
    memo: dict = _memo_field()


@dataclass(frozen=True, eq=True)
class Fix(Process):
    var: str
    body: Process
    memo: dict = _memo_field()


@dataclass(frozen=True, eq=True)
class Prefix(Process):
    symbol: Symbol
    args: Tuple[Process, ...] = ()
    memo: dict = _memo_field()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True, eq=True)
class Zero(Process):
    memo: dict = _memo_field()


@dataclass(frozen=True, eq=True)
class Sum(Process):
    left: Process
    right: Process
    memo: dict = _memo_field()


@dataclass(frozen=True, eq=True)
class Restrict(Process):
    body: Process
    names: FrozenSet[str]
    memo: dict = _memo_field()

    def __post_init__(self):
        object.__setattr__(self, "names", frozenset(self.names))


@dataclass(frozen=True, eq=True)
class Par(Process):
    """Parallel composition located on the vertices of ``graph``."""

    graph: LocGraph
    components: Tuple[Tuple[Location, Process], ...]
    memo: dict = _memo_field()

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda lc: lc[0]))
        object.__setattr__(self, "components", comps)
        if frozenset(l for l, _ in comps) != self.graph.web or len(comps) != len(self.graph.web):
            raise ValueError("components must be indexed exactly by the web of the graph")

    @classmethod
    def of(cls, graph: LocGraph, comps: Mapping[Location, Process]) -> "Par":
        return cls(graph, tuple(comps.items()))

    @property
    def web(self) -> frozenset:
        return self.graph.web

    def component_map(self) -> Dict[Location, Process]:
        m = self.memo.get("map")
        if m is None:
            m = self.memo["map"] = dict(self.components)
        return m

    def __getitem__(self, loc: Location) -> Process:
        return self.component_map()[loc]

    def coherent(self, p: Location, q: Location) -> bool:
        return self.graph.coherent(p, q)


ZERO = Zero()
EMPTY = Par(LocGraph.empty(), ())


def sum_of(terms: Iterable[Process]) -> Process:
    """Right-nested sum; the empty sum is ``0``."""
    terms = list(terms)
    if not terms:
        return ZERO
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Sum(t, out)
    return out


def prefix(name: str, *args: Process, co: bool = False) -> Prefix:
    return Prefix(Symbol(name, co), tuple(args))


def located(*comps: Process, edges: Iterable[Tuple[int, int]] = (), full: bool = False) -> Par:
    """Parallel composition of guarded sums at fresh locations.

    ``edges`` refers to components by position; ``full`` connects every pair.
    """
    locs = fresh_locations(len(comps))
    if full:
        graph = LocGraph.complete(locs)
    else:
        graph = LocGraph.build(locs, [(locs[i], locs[j]) for i, j in edges])
    return Par.of(graph, dict(zip(locs, comps)))


# --------------------------------------------------------------------------
# canonicity

class Canonicity(enum.Enum):
    CANONICAL_PROCESS = "CanonicalProcess"
    CANONICAL_GUARDED_SUM = "CanonicalGuardedSum"
    RECURSIVE_CANONICAL_GUARDED_SUM = "RecursiveCanonicalGuardedSum"
    NOT_CANONICAL = "NotCanonical"


CP = Canonicity.CANONICAL_PROCESS
CGS = Canonicity.CANONICAL_GUARDED_SUM
RCGS = Canonicity.RECURSIVE_CANONICAL_GUARDED_SUM
NOT_CANONICAL = Canonicity.NOT_CANONICAL


def classify(p: Process) -> Canonicity:
    """Classify ``p`` by the mutual induction on canonical processes and guarded sums.

    Returns the most specific class (a canonical guarded sum is also a
    recursive one).
    """
    cached = p.memo.get("class")
    if cached is not None:
        return cached
    if isinstance(p, Var):
        res = CP
    elif isinstance(p, Par):
        res = CP if all(is_recursive_guarded_sum(c) for _, c in p.components) else NOT_CANONICAL
    elif isinstance(p, Restrict):
        res = CP if is_canonical_process(p.body) else NOT_CANONICAL
    elif isinstance(p, Zero):
        res = CGS
    elif isinstance(p, Prefix):
        res = CGS if all(is_canonical_process(a) for a in p.args) else NOT_CANONICAL
    elif isinstance(p, Sum):
        res = CGS if classify(p.left) is CGS and classify(p.right) is CGS else NOT_CANONICAL
    elif isinstance(p, Fix):
        res = RCGS if is_recursive_guarded_sum(p.body) else NOT_CANONICAL
    else:
        raise TypeError(f"not a process: {p!r}")
    p.memo["class"] = res
    return res


def is_guarded_sum(p: Process) -> bool:
    return classify(p) is CGS


def is_recursive_guarded_sum(p: Process) -> bool:
    return classify(p) in (CGS, RCGS)


def is_canonical_process(p: Process) -> bool:
    """Canonical process, counting a (recursive) guarded sum as a one-location one."""
    return classify(p) is not NOT_CANONICAL


def noncanonical_witness(p: Process) -> Optional[Process]:
    """An innermost offending subterm, or None if ``p`` is canonical."""
    if is_canonical_process(p):
        return None
    for child in children(p):
        w = noncanonical_witness(child)
        if w is not None:
            return w
    return p


def children(p: Process) -> List[Process]:
    if isinstance(p, Fix):
        return [p.body]
    if isinstance(p, Prefix):
        return list(p.args)
    if isinstance(p, Sum):
        return [p.left, p.right]
    if isinstance(p, Restrict):
        return [p.body]
    if isinstance(p, Par):
        return [c for _, c in p.components]
    return []


# --------------------------------------------------------------------------
# variables and substitution

def free_vars(p: Process) -> FrozenSet[str]:
    fv = p.memo.get("fv")
    if fv is not None:
        return fv
    if isinstance(p, Var):
        fv = frozenset((p.name,))
    elif isinstance(p, Fix):
        fv = free_vars(p.body) - {p.var}
    else:
        fv = frozenset().union(*(free_vars(c) for c in children(p)))
    p.memo["fv"] = fv
    return fv


def is_closed(p: Process) -> bool:
    return not free_vars(p)


def _fresh_var(base: str, avoid) -> str:
    n = 1
    while f"{base}{n}" in avoid:
        n += 1
    return f"{base}{n}"


def rename_locations(par: Par, mapping: Mapping[Location, Location]) -> Par:
    return Par.of(par.graph.relabel(mapping), {mapping[l]: c for l, c in par.components})


def freshen(par: Par) -> Par:
    """Alpha-converted copy of ``par`` whose web uses brand new locations."""
    locs = sorted(par.web)
    return rename_locations(par, dict(zip(locs, fresh_locations(len(locs)))))


def splice(par: Par, loc: Location, inserted: Process) -> Par:
    """Put ``inserted`` at ``loc``: a guarded sum replaces the component,
    a parallel composition replaces the vertex (inheriting its edges)."""
    if isinstance(inserted, Restrict):
        raise UnsupportedRestriction("a restricted process cannot be placed inside a composition")
    if isinstance(inserted, Par):
        h = freshen(inserted)
        comps = {l: c for l, c in par.components if l != loc}
        comps.update(h.components)
        return Par.of(graph_subst(par.graph, h.graph, loc), comps)
    comps = dict(par.components)
    comps[loc] = inserted
    return Par.of(par.graph, comps)


def substitute_var(r: Process, p: Process, x: str) -> Process:
    """``r`` with every free occurrence of ``x`` replaced by ``p``.

    Bound variables are renamed to avoid capture.  An occurrence of ``x`` as a
    component of a parallel composition is spliced in (see :func:`splice`).
    Subterms without free ``x`` are returned unchanged (same object).
    """
    fv_p = free_vars(p)

    def go(t: Process) -> Process:
        if x not in free_vars(t):
            return t
        if isinstance(t, Var):
            return p
        if isinstance(t, Fix):
            var, body = t.var, t.body
            if var in fv_p:
                new = _fresh_var(var, fv_p | free_vars(body) | {x})
                body = substitute_var(body, Var(new), var)
                var = new
            return Fix(var, go(body))
        if isinstance(t, Prefix):
            return Prefix(t.symbol, tuple(go(a) for a in t.args))
        if isinstance(t, Sum):
            return Sum(go(t.left), go(t.right))
        if isinstance(t, Restrict):
            return Restrict(go(t.body), t.names)
        if isinstance(t, Par):
            out = Par.of(t.graph, {l: c if isinstance(c, Var) and c.name == x else go(c)
                                   for l, c in t.components})
            for l, c in t.components:
                if isinstance(c, Var) and c.name == x:
                    out = splice(out, l, p)
            return out
        raise TypeError(f"not a process: {t!r}")

    return go(r)


def cansum(s: Process, bound: int = CANSUM_DEPTH) -> Process:
    """Unfold the outer fixpoints of a recursive canonical guarded sum."""
    cached = s.memo.get("cansum")
    if cached is not None:
        return cached
    if not is_recursive_guarded_sum(s):
        raise NotRecursiveGuardedSum(f"not a recursive canonical guarded sum: {pretty(s)}")
    cur, steps = s, 0
    while isinstance(cur, Fix):
        steps += 1
        if steps > bound:
            raise NonTermination(f"more than {bound} unfoldings of {pretty(s)}")
        cur = substitute_var(cur.body, cur, cur.var)
    s.memo["cansum"] = cur
    return cur


def summands(gs: Process) -> List[Tuple[Symbol, Tuple[Process, ...]]]:
    """Prefixed summands of a canonical guarded sum, left to right."""
    if not is_guarded_sum(gs):
        raise NotGuardedSum(f"not a canonical guarded sum: {pretty(gs)}")
    cached = gs.memo.get("summands")
    if cached is not None:
        return cached
    out: List[Tuple[Symbol, Tuple[Process, ...]]] = []
    stack = [gs]
    while stack:
        t = stack.pop()
        if isinstance(t, Sum):
            stack.append(t.right)
            stack.append(t.left)
        elif isinstance(t, Prefix):
            out.append((t.symbol, t.args))
    gs.memo["summands"] = out
    return out


def symbols_of(p: Process) -> Dict[str, int]:
    """Names and arities of every prefix symbol occurring in ``p``."""
    out: Dict[str, int] = {}
    stack = [p]
    while stack:
        t = stack.pop()
        if isinstance(t, Prefix):
            out[t.symbol.name] = len(t.args)
        stack.extend(children(t))
    return out


def check_signature(p: Process, sig: Signature) -> None:
    stack = [p]
    while stack:
        t = stack.pop()
        if isinstance(t, Prefix):
            sig.check(t.symbol, len(t.args))
        stack.extend(children(t))


def size(p: Process) -> int:
    """Number of syntax nodes; the empty composition counts one."""
    if isinstance(p, Par):
        return 1 + sum(size(c) for _, c in p.components)
    return 1 + sum(size(c) for c in children(p))


# --------------------------------------------------------------------------
# located view

def strip_restrictions(p: Process) -> Tuple[Process, FrozenSet[str]]:
    names: FrozenSet[str] = frozenset()
    while isinstance(p, Restrict):
        names |= p.names
        p = p.body
    return p, names


def as_par(p: Process, loc: Location = 1) -> Par:
    """View a process without restriction as a parallel composition."""
    if isinstance(p, Par):
        return p
    if isinstance(p, Restrict):
        raise UnsupportedRestriction("restriction is only supported as the outermost operator")
    return Par.of(LocGraph.build([loc]), {loc: p})


def as_located(p: Process) -> Tuple[Par, FrozenSet[str]]:
    core, names = strip_restrictions(p)
    return as_par(core), names


def wrap_restrictions(core: Process, names: FrozenSet[str]) -> Process:
    return Restrict(core, names) if names else core


def web(p: Process) -> frozenset:
    return as_located(p)[0].web


# --------------------------------------------------------------------------
# structural keys (alpha-equivalence)

def term_key(t: Process, env: Tuple[str, ...] = (), max_web: Optional[int] = None) -> str:
    """Alpha-invariant key of a term: de Bruijn variables, canonical webs."""
    closed = not env
    if closed:
        k = t.memo.get("key")
        if k is not None:
            return k
    if isinstance(t, Var):
        k = f"#{env.index(t.name)}" if t.name in env else f"${t.name}"
    elif isinstance(t, Fix):
        k = f"mu({term_key(t.body, (t.var,) + env, max_web)})"
    elif isinstance(t, Prefix):
        k = f"{'~' if t.symbol.co else ''}{t.symbol.name}({','.join(arg_key(a, env, max_web) for a in t.args)})"
    elif isinstance(t, Zero):
        k = "0"
    elif isinstance(t, Sum):
        k = "+(" + ",".join(term_key(s, env, max_web) for s in _flat_sum(t)) + ")"
    elif isinstance(t, Restrict):
        k = f"res{sorted(t.names)}({arg_key(t.body, env, max_web)})"
    elif isinstance(t, Par):
        k = par_key(t, env, max_web)
    else:
        raise TypeError(f"not a process: {t!r}")
    if closed:
        t.memo["key"] = k
    return k


def _flat_sum(t: Process) -> List[Process]:
    if isinstance(t, Sum):
        return _flat_sum(t.left) + _flat_sum(t.right)
    return [t]


def arg_key(a: Process, env=(), max_web=None) -> str:
    if isinstance(a, (Par, Var, Restrict)):
        return term_key(a, env, max_web)
    return "par" + repr(canonical_certificate(["v"], {"v": term_key(a, env, max_web)}, {}))


def par_key(par: Par, env=(), max_web=None, labels: Optional[Mapping[Location, object]] = None) -> str:
    colours = {l: term_key(c, env, max_web) for l, c in par.components}
    if labels is not None:
        colours = {l: f"{k}@{labels[l]}" for l, k in colours.items()}
    edges = {e: 1 for e in par.graph.edges}
    return "par" + repr(canonical_certificate(par.web, colours, edges, max_web))


def process_key(p: Process, max_web: Optional[int] = None) -> str:
    core, names = strip_restrictions(p)
    k = arg_key(core, (), max_web)
    return f"res{sorted(names)}({k})" if names else k


# --------------------------------------------------------------------------
# printing (concrete syntax accepted by tccs.frontend.parser)

def pretty(p: Process) -> str:
    return _pp(p, 0)


def loc_name(l: Location) -> str:
    return f"l{l}"


# precedence: 0 = par, 1 = restriction, 2 = sum, 3 = atom
def _pp(p: Process, ctx: int) -> str:
    if isinstance(p, Var):
        return p.name
    if isinstance(p, Zero):
        return "0"
    if isinstance(p, Prefix):
        sym = f"co {p.symbol.name}" if p.symbol.co else p.symbol.name
        return f"{sym}.({', '.join(_pp(a, 0) for a in p.args)})"
    if isinstance(p, Fix):
        s = f"mu {p.var}. {_pp(p.body, 0)}"
        return f"({s})" if ctx > 0 else s
    if isinstance(p, Sum):
        s = " + ".join(_pp(t, 3) for t in _flat_sum(p))
        return f"({s})" if ctx > 2 else s
    if isinstance(p, Restrict):
        s = f"{_pp(p.body, 1)} \\ {{{', '.join(sorted(p.names))}}}"
        return f"({s})" if ctx > 1 else s
    if isinstance(p, Par):
        if not p.components:
            return "eps"
        if len(p.components) >= 2 and p.graph.is_complete() and \
                all(is_recursive_guarded_sum(c) for _, c in p.components):
            s = " | ".join(_pp(c, 1) for _, c in p.components)
            return f"({s})" if ctx > 0 else s
        comps = ", ".join(f"{loc_name(l)}: {_pp(c, 0)}" for l, c in p.components)
        edges = ", ".join(f"{loc_name(a)}-{loc_name(b)}" for a, b in p.graph.edge_list())
        return f"par {{{comps}}} edges {{{edges}}}"
    raise TypeError(f"not a process: {p!r}")
