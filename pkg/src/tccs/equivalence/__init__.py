"""Equivalences: localized weak bisimulation, barbed bisimilarity, congruence refutation, CCS."""
from ..verdict import Result, Verdict
from .relations import (LocalizedRelation, LocalizedTriple, compose_localized, compose_parallel,
                        full_relation, identity_on, identity_relation, is_adapted, parallel_extension, transpose)
from .bisim import (BisimulationGame, all_challenges, bisimilar, challenges, check_localized_bisimulation,
                    greatest_bisimulation, saturate)
from .barbed import barbed_bisimilar
from .congruence import ContextGrammar, fill, refute_congruence
from .ccs import ccs_lift, ccs_project, ccs_violation, ccs_weak_bisimilar, is_ccs_fragment

__all__ = [
    "LocalizedRelation", "LocalizedTriple", "Result", "Verdict", "compose_localized", "compose_parallel",
    "full_relation", "identity_on", "identity_relation", "is_adapted", "parallel_extension", "transpose",
    "BisimulationGame", "all_challenges", "bisimilar", "challenges", "check_localized_bisimulation",
    "greatest_bisimulation", "saturate", "barbed_bisimilar", "ContextGrammar", "fill", "refute_congruence",
    "ccs_lift", "ccs_project", "ccs_violation", "ccs_weak_bisimilar", "is_ccs_fragment",
]
