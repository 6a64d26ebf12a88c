"""Workbench for CCS over trees: located processes, reduction, localized
labelled transitions and bisimulations, and tree automata."""
from .errors import TCCSError
from .locgraph import LocGraph, canonical_form, gplus, graph_subst
from .syntax import (EMPTY, ZERO, Canonicity, Fix, Par, Prefix, Process, Restrict, Signature, Sum, Symbol, Var,
                     Zero, cansum, classify, located, prefix, pretty, substitute_var, sum_of, summands)
from .reduction import Redex, Residual, Step, enumerate_redexes, explore, step, tau_closure
from .lts import barbs, labeled_transitions, weak_transitions
from .verdict import Result, Verdict
from .automata import Tree, TreeAutomaton, encode_automaton, encode_tree, recognize_by_interaction, recognizes_oracle

__all__ = [
    "TCCSError", "LocGraph", "canonical_form", "gplus", "graph_subst",
    "EMPTY", "ZERO", "Canonicity", "Fix", "Par", "Prefix", "Process", "Restrict", "Signature", "Sum", "Symbol",
    "Var", "Zero", "cansum", "classify", "located", "prefix", "pretty", "substitute_var", "sum_of", "summands",
    "Redex", "Residual", "Step", "enumerate_redexes", "explore", "step", "tau_closure",
    "barbs", "labeled_transitions", "weak_transitions", "Result", "Verdict",
    "Tree", "TreeAutomaton", "encode_automaton", "encode_tree", "recognize_by_interaction", "recognizes_oracle",
]
