"""A guided tour: reduction, recognition, and the equivalences.

Run from the repository root:  python demos/walkthrough.py
"""
from pathlib import Path

from tccs.automata import recognize_by_interaction, recognizes_oracle
from tccs.equivalence import barbed_bisimilar, bisimilar, greatest_bisimulation, refute_congruence
from tccs.frontend import parse
from tccs.reduction import enumerate_redexes, explore, step
from tccs.syntax import pretty

HERE = Path(__file__).parent


def load(name):
    return parse((HERE / name).read_text())


def reduction_tour():
    sf = load("interaction.tccs")
    p = sf.definitions["P"]
    print("P =", pretty(p))
    for r in enumerate_redexes(p):
        print(f"  redex {r.symbol.name} at {r.p},{r.q}")
    # fire the f interaction and look at the coherence of what it spawned
    f_redex = next(r for r in enumerate_redexes(p) if r.symbol.name == "f")
    st = step(p, f_redex)
    print("after f:", pretty(st.reduct))
    print("  residual:", dict(sorted(st.residual.mapping.items())))
    g = explore(p)
    print(f"  reachable states: {len(g.states)}, reductions: {len(g.edges)}")


def recognition_tour():
    sf = load("interaction.tccs")
    a = sf.automata["A"]
    for name, t in sf.trees.items():
        v = recognize_by_interaction(a, "X", t)
        print(f"  {name:8} {str(t):28} interaction={v.result.value:3} oracle={recognizes_oracle(a, 'X', t)}")


def equivalence_tour():
    sf = load("choice.tccs")
    d = sf.definitions
    print("P vs Q, barbed:", barbed_bisimilar(d["P"], d["Q"]).result.value)
    v = barbed_bisimilar(d["PR"], d["QR"])
    print("PR vs QR, barbed:", v.result.value, "- barb", v.witness["barb"], "only on the", v.witness["holder"])
    print("P vs Q, localized:", bisimilar(d["P"], d["Q"]).result.value)
    v = refute_congruence(d["P"], d["Q"], 8, signature=sf.signature)
    print(f"separating context (size {v.witness['size']}):", v.witness["context"])

    sf = load("interleaving.tccs")
    v, rel = greatest_bisimulation(sf.definitions["Par"], sf.definitions["Seq"], bound=16)
    print(f"Par vs Seq, localized: {v.result.value} ({len(rel)} triples in the bisimulation)")


if __name__ == "__main__":
    print("== reduction ==")
    reduction_tour()
    print("== recognition ==")
    recognition_tour()
    print("== equivalences ==")
    equivalence_tour()
