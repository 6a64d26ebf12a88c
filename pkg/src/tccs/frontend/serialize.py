"""JSON exchange format (versioned by a ``schema`` field)."""
from __future__ import annotations

import json
from typing import Any, Dict, List, Tuple

from ..reduction import ReductionGraph, Step
from ..syntax import Process, Symbol, as_located, pretty
from ..verdict import Verdict

SCHEMA = 1


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=repr)
    if isinstance(x, Symbol):
        return str(x)
    if isinstance(x, Process):
        return pretty(x)
    return x


def process_json(p: Process) -> Dict[str, Any]:
    par, names = as_located(p)
    return {
        "text": pretty(p),
        "web": sorted(par.web),
        "edges": [list(e) for e in par.graph.edge_list()],
        "components": {str(l): pretty(c) for l, c in par.components},
        "restricted": sorted(names),
    }


def step_json(st: Step) -> Dict[str, Any]:
    r = st.redex
    return {
        "redex": {"p": r.p, "q": r.q, "symbol": r.symbol.name},
        "reduct": process_json(st.reduct),
        "residual": {str(k): v for k, v in sorted(st.residual.mapping.items())},
    }


def verdict_json(v: Verdict, **extra) -> Dict[str, Any]:
    out = {"schema": SCHEMA, "result": v.result.value, "witness": _plain(v.witness)}
    out.update(_plain(extra))
    return out


def lts_json(states: List[Process], edges: List[Tuple[int, int, str]]) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "states": [pretty(s) for s in states],
        "transitions": [{"source": s, "target": d, "label": lab} for s, d, lab in edges],
    }


def reduction_graph_json(g: ReductionGraph) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "complete": g.complete,
        "states": [pretty(s) for s in g.states],
        "edges": [{"source": s, "target": d, "redex": [r.p, r.q, r.symbol.name]} for s, d, r in g.edges],
    }


def dumps(obj: Dict[str, Any]) -> str:
    if "schema" not in obj:
        obj = {"schema": SCHEMA, **obj}
    return json.dumps(_plain(obj), indent=2, sort_keys=False)


def lts_dot(states: List[Process], edges: List[Tuple[int, int, str]], name: str = "lts") -> str:
    lines = [f'digraph "{name}" {{']
    for i, s in enumerate(states):
        label = pretty(s).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  s{i} [label="{label}"];')
    for s, d, lab in edges:
        lines.append(f'  s{s} -> s{d} [label="{lab}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
