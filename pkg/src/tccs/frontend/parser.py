"""Concrete syntax for processes, signatures, automata and trees.

::

    # comment
    sig f/2, g/2, a/0;
    def P = f.(g.(eps, eps), eps) + g.(f.(eps, eps), eps);
    def Q = f.(eps, eps) | g.(eps, eps);
    def R = par {x: a.(), y: co a.()} edges {x-y};
    def N = mu X. a.() + f.(X, X);
    def S = (a.() | co a.()) \\ {a};
    automaton A { states X; X -> f(X, X); X -> a; }
    tree T = f(a, a);

``co f.(...)`` and ``f~.(...)`` are co-prefixes; ``eps`` is the empty
composition; ``|`` is full parallel composition.  An identifier that names an
earlier definition (and is not bound by ``mu``) stands for that definition.
Locations named ``l<n>`` or ``<n>`` keep the number ``n``; other names are
numbered in order of appearance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..automata import Tree, TreeAutomaton
from ..errors import ArityMismatch, ParseError, UndeclaredSymbol, UnsupportedRestriction
from ..locgraph import Location, LocGraph, gplus
from ..syntax import (EMPTY, ZERO, Canonicity, Fix, Par, Prefix, Process, Restrict, Signature, Sum, Symbol, Var,
                      classify, free_vars, noncanonical_witness, pretty, rename_locations, splice,
                      substitute_var)

KEYWORDS = {"sig", "def", "automaton", "tree", "mu", "co", "par", "edges", "eps", "states"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[.(),{}:;=+|\\~/-])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str  # name, int, punct, arrow, eof
    text: str
    line: int
    column: int


def tokenize(source: str) -> List[Token]:
    out: List[Token] = []
    line, start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, m.start() - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class Diagnostic:
    kind: str  # "NotCanonical" or "OpenProcess"
    name: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind}: {self.name}: {self.message}"


@dataclass
class SourceFile:
    signature: Signature = field(default_factory=Signature)
    definitions: Dict[str, Process] = field(default_factory=dict)
    locations: Dict[str, Dict[str, Location]] = field(default_factory=dict)  # per definition: name -> id
    automata: Dict[str, TreeAutomaton] = field(default_factory=dict)
    trees: Dict[str, Tree] = field(default_factory=dict)
    diagnostics: List[Diagnostic] = field(default_factory=list)

    def noncanonical(self, name: str) -> Optional[Diagnostic]:
        return next((d for d in self.diagnostics if d.name == name and d.kind == "NotCanonical"), None)

    def location(self, definition: str, name: str) -> Location:
        """Resolve a location name (or number) of a definition's outer composition."""
        names = self.locations.get(definition, {})
        if name in names:
            return names[name]
        m = re.fullmatch(r"l?(\d+)", name)
        if m:
            return int(m.group(1))
        raise KeyError(f"definition {definition} has no location named {name!r}")


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.out = SourceFile()
        self.bound: List[str] = []  # mu-bound variables in scope
        self.par_names: Dict[int, Dict[str, Location]] = {}
        self.declared = False

    # token helpers --------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        t = tok or self.tok
        return ParseError(msg, t.line, t.column)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r} but found {found!r}")
        t = self.tok
        self.i += 1
        return t

    def name(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise self.error(f"expected {what} but found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.tok
        if t.kind != "int":
            raise self.error(f"expected a number but found {t.text or 'end of input'!r}")
        self.i += 1
        return int(t.text)

    # file level -----------------------------------------------------------
    def parse_file(self) -> SourceFile:
        while self.tok.kind != "eof":
            if self.accept("sig"):
                self.sig_decl()
            elif self.accept("def"):
                self.definition()
            elif self.accept("automaton"):
                self.automaton()
            elif self.accept("tree"):
                self.tree_decl()
            else:
                raise self.error(f"expected 'sig', 'def', 'automaton' or 'tree' but found {self.tok.text!r}")
        return self.out

    def sig_decl(self):
        self.declared = True
        while True:
            t = self.name("symbol name")
            self.expect("/")
            n = self.integer()
            try:
                self.out.signature.declare(t.text, n)
            except ArityMismatch as exc:
                raise ArityMismatch(f"{t.line}:{t.column}: {exc}") from None
            if not self.accept(","):
                break
        self.expect(";")

    def definition(self):
        t = self.name("definition name")
        self.expect("=")
        self.par_names = {}
        body = self.process()
        self.expect(";")
        core = body.body if isinstance(body, Restrict) else body
        locs = dict(self.par_names.get(id(core), {}))
        refs = [r for r in sorted(free_vars(body)) if r in self.out.definitions]
        for ref in refs:
            body = substitute_var(body, self.out.definitions[ref], ref)
        if refs:
            body, ren = _renumber_outer(body)
            locs = {k: ren[v] for k, v in locs.items() if v in ren}
        self.out.definitions[t.text] = body
        self.out.locations[t.text] = locs
        if classify(body) is Canonicity.NOT_CANONICAL:
            bad = noncanonical_witness(body)
            where = pretty(bad) if bad is not None else pretty(body)
            self.out.diagnostics.append(Diagnostic("NotCanonical", t.text, f"not canonical: {where}",
                                                   t.line, t.column))
        elif free_vars(body):
            self.out.diagnostics.append(Diagnostic("OpenProcess", t.text,
                                                   f"free variables {', '.join(sorted(free_vars(body)))}",
                                                   t.line, t.column))

    def tree_decl(self):
        t = self.name("tree name")
        self.expect("=")
        self.out.trees[t.text] = self.tree()
        self.expect(";")

    def tree(self) -> Tree:
        t = self.name("tree symbol")
        kids: List[Tree] = []
        if self.accept("("):
            if not self.accept(")"):
                kids.append(self.tree())
                while self.accept(","):
                    kids.append(self.tree())
                self.expect(")")
        self.check_symbol(t, len(kids))
        return Tree(t.text, tuple(kids))

    def automaton(self):
        t = self.name("automaton name")
        self.expect("{")
        states: List[str] = []
        transitions = []
        while not self.accept("}"):
            if self.accept("states"):
                states.append(self.name("state").text)
                while self.accept(","):
                    states.append(self.name("state").text)
                self.expect(";")
                continue
            x = self.name("state").text
            self.expect("->")
            f = self.name("symbol")
            ys: List[str] = []
            if self.accept("("):
                if not self.accept(")"):
                    ys.append(self.name("state").text)
                    while self.accept(","):
                        ys.append(self.name("state").text)
                    self.expect(")")
            self.check_symbol(f, len(ys))
            transitions.append((x, f.text, tuple(ys)))
            self.expect(";")
        self.out.automata[t.text] = TreeAutomaton.of(transitions, states)

    def check_symbol(self, t: Token, nargs: int):
        """Declared symbols must be used at their arity; automata and trees may declare new ones."""
        sig = self.out.signature
        if t.text in sig:
            if sig.arity(t.text) != nargs:
                raise ArityMismatch(f"{t.line}:{t.column}: {t.text} has arity {sig.arity(t.text)} "
                                    f"but is used with {nargs}")
        else:
            sig.declare(t.text, nargs)

    # processes ------------------------------------------------------------
    def process(self) -> Process:
        """Lowest precedence: ``|`` (full composition)."""
        start = self.tok
        parts = [self.restriction()]
        while self.accept("|"):
            parts.append(self.restriction())
        if len(parts) == 1:
            return parts[0]
        try:
            return full_composition(parts)
        except UnsupportedRestriction as exc:
            raise self.error(str(exc), start) from None

    def restriction(self) -> Process:
        p = self.summation()
        while self.accept("\\"):
            self.expect("{")
            names = set()
            if not self.at("}"):
                names.add(self.name("symbol name").text)
                while self.accept(","):
                    names.add(self.name("symbol name").text)
            self.expect("}")
            p = Restrict(p, frozenset(names))
        return p

    def summation(self) -> Process:
        terms = [self.atom()]
        while self.accept("+"):
            terms.append(self.atom())
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = Sum(t, out)
        return out

    def atom(self) -> Process:
        t = self.tok
        if t.kind == "int":
            if t.text != "0":
                raise self.error(f"unexpected number {t.text}")
            self.i += 1
            return ZERO
        if self.accept("("):
            p = self.process()
            self.expect(")")
            return p
        if self.accept("eps"):
            return EMPTY
        if self.accept("mu"):
            v = self.name("variable").text
            self.expect(".")
            self.bound.append(v)
            try:
                body = self.process()
            finally:
                self.bound.pop()
            return Fix(v, body)
        if self.accept("co"):
            return self.prefix(self.name("symbol name"), co=True)
        if self.accept("par"):
            return self.par_block()
        if t.kind == "name" and t.text not in KEYWORDS:
            self.i += 1
            if self.accept("~"):
                return self.prefix(t, co=True)
            if self.at("."):
                return self.prefix(t, co=False)
            return Var(t.text)
        raise self.error(f"expected a process but found {t.text or 'end of input'!r}")

    def prefix(self, t: Token, co: bool) -> Prefix:
        self.expect(".")
        self.expect("(")
        args: List[Process] = []
        if not self.accept(")"):
            args.append(self.process())
            while self.accept(","):
                args.append(self.process())
            self.expect(")")
        sig = self.out.signature
        if t.text not in sig:
            if self.declared:
                raise UndeclaredSymbol(f"{t.line}:{t.column}: symbol {t.text} is not declared")
            sig.declare(t.text, len(args))
        elif sig.arity(t.text) != len(args):
            raise ArityMismatch(f"{t.line}:{t.column}: {t.text} has arity {sig.arity(t.text)} "
                                f"but is given {len(args)} argument(s)")
        return Prefix(Symbol(t.text, co), tuple(args))

    def par_block(self) -> Process:
        self.expect("{")
        entries: List[Tuple[Token, Process]] = []
        if not self.at("}"):
            while True:
                tok = self.tok
                if tok.kind == "int":
                    self.i += 1
                else:
                    tok = self.name("location name")
                self.expect(":")
                entries.append((tok, self.process()))
                if not self.accept(","):
                    break
        self.expect("}")
        names: Dict[str, Location] = {}
        for tok, _ in entries:
            if tok.text in names:
                raise self.error(f"location {tok.text} listed twice", tok)
            m = re.fullmatch(r"l?(\d+)", tok.text)
            names[tok.text] = int(m.group(1)) if m else 0
        if len(set(v for v in names.values() if v)) != sum(1 for v in names.values() if v):
            raise self.error("two location names denote the same location")
        nxt = max(names.values(), default=0) + 1
        for k in names:
            if not names[k]:
                names[k], nxt = nxt, nxt + 1
        edges = []
        if self.accept("edges"):
            self.expect("{")
            if not self.at("}"):
                while True:
                    a = self.loc_ref(names)
                    self.expect("-")
                    b = self.loc_ref(names)
                    edges.append((a, b))
                    if not self.accept(","):
                        break
            self.expect("}")
        graph = LocGraph.build(names.values(), edges)
        comps = {names[tok.text]: p for tok, p in entries}
        # placeholders first, then splice compositions into their vertices
        out = Par.of(graph, {l: (p if not isinstance(p, (Par, Restrict)) else ZERO) for l, p in comps.items()})
        for l, p in sorted(comps.items()):
            if isinstance(p, Restrict):
                raise self.error("restriction is only allowed outermost")
            if isinstance(p, Par):
                out = splice(out, l, p)
        self.par_names[id(out)] = names
        return out

    def loc_ref(self, names: Dict[str, Location]) -> Location:
        tok = self.tok
        if tok.kind in ("int", "name"):
            self.i += 1
            if tok.text in names:
                return names[tok.text]
        raise self.error(f"unknown location {tok.text!r}", tok)


def full_composition(parts: List[Process]) -> Par:
    """Full parallel composition: every location of one part is coherent with every other part."""
    out: Optional[Par] = None
    for p in parts:
        if isinstance(p, Restrict):
            raise UnsupportedRestriction("restriction is only allowed outermost")
        if isinstance(p, Par):
            piece = p
        else:
            piece = Par.of(LocGraph.build([1]), {1: p})
        if out is None:
            out = _renumber(piece, 1)
            continue
        piece = _renumber(piece, max(out.web, default=0) + 1)
        cross = [(a, b) for a in out.web for b in piece.web]
        comps = dict(out.components)
        comps.update(piece.components)
        out = Par.of(gplus(out.graph, piece.graph, cross), comps)
    assert out is not None
    return out


def _renumber_outer(p: Process) -> Tuple[Process, Dict[Location, Location]]:
    """Number the outer composition 1..n (spliced definitions bring fresh ids)."""
    core, names = (p.body, p.names) if isinstance(p, Restrict) else (p, frozenset())
    if not isinstance(core, Par):
        return p, {}
    ren = {l: i for i, l in enumerate(sorted(core.web), 1)}
    core = rename_locations(core, ren)
    return (Restrict(core, names) if names else core), ren


def _renumber(par: Par, start: int) -> Par:
    return rename_locations(par, {l: start + i for i, l in enumerate(sorted(par.web))})


def parse(source: str) -> SourceFile:
    """Parse a source file.  Raises ParseError, ArityMismatch or UndeclaredSymbol."""
    return _Parser(source).parse_file()


def parse_process(text: str, signature: Optional[Signature] = None) -> Process:
    """Parse a single process expression."""
    p = _Parser(text)
    if signature is not None:
        p.out.signature = Signature(dict(signature.arities))
        p.declared = bool(signature.arities)
    body = p.process()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after process")
    return body
