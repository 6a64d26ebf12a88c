"""Command line interface.

Exit status: 0 for Yes or success, 1 for No, 2 for Unknown, 64 for usage
errors, 65 for malformed or unsuitable input.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from ..automata import parse_tree, recognize_by_interaction, recognizes_oracle
from ..equivalence import barbed_bisimilar, bisimilar, refute_congruence
from ..errors import ParseError, TCCSError
from ..locgraph import process_to_dot
from ..lts import barbs, lts_graph, weak_answers
from ..reduction import enumerate_redexes, explore, step
from ..syntax import Process, Symbol, as_located, pretty
from ..verdict import Result, Verdict
from . import serialize
from .parser import SourceFile, parse

EXIT_YES, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA = 64, 65

_VERDICT_EXIT = {Result.YES: EXIT_YES, Result.NO: EXIT_NO, Result.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load(path: str) -> SourceFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text)


def _definition(sf: SourceFile, name: str) -> Process:
    if name not in sf.definitions:
        raise UsageError(f"no definition named {name!r}")
    bad = sf.noncanonical(name)
    if bad is not None:
        raise TCCSError(str(bad))
    return sf.definitions[name]


def _emit_verdict(args, v: Verdict, **extra) -> int:
    if args.json:
        print(serialize.dumps(serialize.verdict_json(v, **extra)))
    else:
        print(v.result.value)
        if v.witness is not None:
            print(serialize.dumps({"witness": v.witness}))
    return _VERDICT_EXIT[v.result]


def _write(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_relation(spec: str, sf: SourceFile, left: str, right: str, p: Process, q: Process):
    lw, rw = as_located(p)[0].web, as_located(q)[0].web
    spec = spec.strip()
    if spec in ("", "full"):
        return None
    if spec == "empty":
        return frozenset()
    if spec == "identity":
        return frozenset((x, x) for x in lw & rw)
    pairs = set()
    for item in spec.split(","):
        a, sep, b = item.strip().partition("-")
        if not sep:
            raise UsageError(f"relation item {item!r} is not of the form x-y")
        try:
            pairs.add((sf.location(left, a.strip()), sf.location(right, b.strip())))
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    return frozenset(pairs)


# --------------------------------------------------------------------------
# subcommands

def cmd_reduce(args) -> int:
    sf = _load(args.file)
    p = _definition(sf, args.proc)
    trace = []
    for _ in range(args.steps):
        redexes = enumerate_redexes(p)
        if not redexes:
            break
        st = step(p, redexes[0])
        trace.append(st)
        p = st.reduct
    if args.json:
        print(serialize.dumps({"steps": [serialize.step_json(s) for s in trace],
                               "final": serialize.process_json(p), "stuck": not enumerate_redexes(p)}))
        return EXIT_YES
    if args.trace:
        for i, st in enumerate(trace, 1):
            r = st.redex
            print(f"{i}. {r.symbol.name} @ {r.p},{r.q}  ->  {pretty(st.reduct)}")
    print(f"{len(trace)} step(s)")
    print(pretty(p))
    return EXIT_YES


def cmd_lts(args) -> int:
    sf = _load(args.file)
    p = _definition(sf, args.proc)
    states, edges = lts_graph(p, args.max_states)
    if args.dot:
        _write(serialize.lts_dot(states, edges, args.proc), args.dot)
    if args.json or not args.dot:
        print(serialize.dumps(serialize.lts_json(states, edges)))
    return EXIT_YES


def cmd_barbs(args) -> int:
    sf = _load(args.file)
    p = _definition(sf, args.proc)
    strong = sorted(barbs(p), key=Symbol.sort_key)
    weak = None
    if args.weak:
        g = explore(p, args.bound)
        weak = sorted(set().union(*(barbs(s) for s in g.states)), key=Symbol.sort_key)
    if args.json:
        obj = {"barbs": [str(b) for b in strong]}
        if weak is not None:
            obj["weak_barbs"] = [str(b) for b in weak]
        print(serialize.dumps(obj))
    else:
        print(" ".join(str(b) for b in strong) if strong else "(none)")
        if weak is not None:
            print("weak: " + (" ".join(str(b) for b in weak) if weak else "(none)"))
    return EXIT_YES


def cmd_check_bisim(args) -> int:
    sf = _load(args.file)
    p, q = _definition(sf, args.left), _definition(sf, args.right)
    rel = _parse_relation(args.rel or "full", sf, args.left, args.right, p, q)
    return _emit_verdict(args, bisimilar(p, q, rel, args.bound, max_nodes=args.max_nodes))


def cmd_check_barbed(args) -> int:
    sf = _load(args.file)
    p, q = _definition(sf, args.left), _definition(sf, args.right)
    return _emit_verdict(args, barbed_bisimilar(p, q, args.bound, args.max_states))


def cmd_falsify(args) -> int:
    sf = _load(args.file)
    p, q = _definition(sf, args.left), _definition(sf, args.right)
    v = refute_congruence(p, q, args.max_context, args.bound, sf.signature, args.max_states)
    return _emit_verdict(args, v)


def cmd_recognize(args) -> int:
    sf = _load(args.file)
    if args.automaton not in sf.automata:
        raise UsageError(f"no automaton named {args.automaton!r}")
    a = sf.automata[args.automaton]
    if args.tree in sf.trees:
        t = sf.trees[args.tree]
    else:
        try:
            t = parse_tree(args.tree)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    v = recognize_by_interaction(a, args.state, t, args.bound)
    extra = {}
    if args.oracle:
        extra["oracle"] = "Yes" if recognizes_oracle(a, args.state, t) else "No"
    if args.json:
        print(serialize.dumps(serialize.verdict_json(v, tree=str(t), **extra)))
    else:
        print(f"interaction: {v.result.value}")
        if args.oracle:
            print(f"oracle: {extra['oracle']}")
    return _VERDICT_EXIT[v.result]


def cmd_export_dot(args) -> int:
    sf = _load(args.file)
    p = _definition(sf, args.proc)
    if args.graph == "process":
        text = process_to_dot(p, args.proc)
    elif args.graph == "reductions":
        text = explore(p, args.bound, args.max_states).to_dot(args.proc)
    else:
        states, edges = lts_graph(p, args.max_states)
        text = serialize.lts_dot(states, edges, args.proc)
    _write(text, args.out)
    return EXIT_YES


def cmd_weak(args) -> int:
    sf = _load(args.file)
    p = _definition(sf, args.proc)
    sym = Symbol(args.symbol[3:].strip(), True) if args.symbol.startswith("co ") else Symbol(args.symbol)
    answers, complete = weak_answers(p, sym, None, args.bound)
    obj = {"complete": complete, "transitions": [
        {"target": serialize.process_json(a.target), "origin": a.transition.origin,
         "residual": {str(k): v for k, v in sorted(a.transition.residual().mapping.items())}}
        for a in answers]}
    print(serialize.dumps(obj))
    return EXIT_YES


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _ArgParser(prog="tccs", description="Workbench for located tree processes.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def common(sp, bound_default=None, states=True):
        sp.add_argument("file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--bound", type=int, default=bound_default)
        if states:
            sp.add_argument("--max-states", type=int, default=50_000)

    sp = sub.add_parser("reduce", help="follow the first redex repeatedly")
    common(sp)
    sp.add_argument("--proc", required=True)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("lts", help="labelled transition graph")
    common(sp)
    sp.add_argument("--proc", required=True)
    sp.add_argument("--dot", metavar="OUT")
    sp.set_defaults(func=cmd_lts)

    sp = sub.add_parser("barbs", help="immediate (and with --weak, reachable) barbs")
    common(sp)
    sp.add_argument("--proc", required=True)
    sp.add_argument("--weak", action="store_true")
    sp.set_defaults(func=cmd_barbs)

    sp = sub.add_parser("weak", help="weak transitions for one symbol")
    common(sp, 64)
    sp.add_argument("--proc", required=True)
    sp.add_argument("--symbol", required=True)
    sp.set_defaults(func=cmd_weak)

    sp = sub.add_parser("check-bisim", help="localized weak bisimilarity")
    common(sp, 64)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--rel", help="full (default), empty, identity, or pairs like 'x-y,z-w'")
    sp.add_argument("--max-nodes", type=int, default=20_000)
    sp.set_defaults(func=cmd_check_bisim)

    sp = sub.add_parser("check-barbed", help="weak barbed bisimilarity")
    common(sp)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.set_defaults(func=cmd_check_barbed)

    sp = sub.add_parser("falsify-congruence", help="search for a distinguishing Y-context")
    common(sp)
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--max-context", type=int, required=True)
    sp.set_defaults(func=cmd_falsify)

    sp = sub.add_parser("recognize", help="tree recognition by interaction")
    common(sp, states=False)
    sp.add_argument("--automaton", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--tree", required=True, help="tree name from the file, or a term like f(a,a)")
    sp.add_argument("--oracle", action="store_true", help="also run classical membership")
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("export-dot", help="DOT rendering of a process or its state space")
    common(sp)
    sp.add_argument("--proc", required=True)
    sp.add_argument("--graph", choices=["process", "reductions", "lts"], default="process")
    sp.add_argument("--out", "-o")
    sp.set_defaults(func=cmd_export_dot)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tccs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"{args.file}:{exc}", file=sys.stderr)
        return EXIT_DATA
    except TCCSError as exc:
        print(f"tccs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
