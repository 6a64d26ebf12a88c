"""Worked examples and generators shared by the test modules."""
from __future__ import annotations

import random
from typing import Callable, Iterator, Tuple

import networkx as nx

from tccs.equivalence import LocalizedTriple
from tccs.errors import StateSpaceExceeded
from tccs.frontend import parse_process
from tccs.generate import random_process
from tccs.lts import lts_graph
from tccs.syntax import as_located

# four components on a complete graph: a at 1, co a at 2, f.(a, co a) at 3, co f.(a, co a) at 4
INTERACTION = "a.() | co a.() | f.(a.(), co a.()) | co f.(a.(), co a.())"

CHOICE_P = "f.(g.(eps, eps), eps) + g.(f.(eps, eps), eps)"
CHOICE_Q = "f.(eps, eps) | g.(eps, eps)"
OBSERVER = "co f.(eps, co g.(a.(eps), eps))"

INTERLEAVED = "a.(eps) | b.(eps)"
SEQUENTIAL = "a.(b.(eps)) + b.(a.(eps))"

ARITIES = {"a": 1, "f": 2, "b": 0}


def proc(text: str):
    return parse_process(text)


def choice_pair():
    return proc(CHOICE_P), proc(CHOICE_Q), proc(OBSERVER)


def lts_size(p, cap: int) -> int:
    """Number of LTS states, or cap + 1 when the cap is exceeded."""
    try:
        return len(lts_graph(p, cap)[0])
    except StateSpaceExceeded:
        return cap + 1


def small_processes(seed: int, count: int, cap: int = 40, **kw) -> Iterator:
    """``count`` random processes whose LTS has at most ``cap`` states."""
    rng = random.Random(seed)
    kw.setdefault("max_components", 2)
    kw.setdefault("depth", 2)
    made = 0
    while made < count:
        p = random_process(rng, ARITIES, **kw)
        if lts_size(p, cap) <= cap:
            made += 1
            yield rng, p


def adapted_specs(rng: random.Random, s_web) -> Tuple[Callable, Callable]:
    """Per-triple C and D that are adapted to the triple's E by construction.

    Each location of S is linked to nothing, to everything, or to the union of
    a random choice of connected components of E (seen as a bipartite graph).
    """
    mode = {s: rng.choice(["none", "all", "components"]) for s in sorted(s_web)}
    salt = rng.random()

    def chosen(t: LocalizedTriple):
        lw, rw = as_located(t.left)[0].web, as_located(t.right)[0].web
        g = nx.Graph()
        g.add_nodes_from(("L", x) for x in lw)
        g.add_nodes_from(("R", y) for y in rw)
        g.add_edges_from((("L", x), ("R", y)) for x, y in t.rel)
        pick = random.Random(f"{salt}{sorted(t.rel)}")
        out = set()
        for comp in sorted(nx.connected_components(g), key=lambda c: sorted(c)):
            if pick.random() < 0.5:
                out |= comp
        return lw, rw, out

    def spec(side: str):
        def build(t: LocalizedTriple):
            lw, rw, picked = chosen(t)
            web = lw if side == "L" else rw
            pairs = set()
            for s, m in mode.items():
                if m == "all":
                    pairs |= {(s, x) for x in web}
                elif m == "components":
                    pairs |= {(s, x) for x in web if (side, x) in picked}
            return pairs
        return build

    return spec("L"), spec("R")
