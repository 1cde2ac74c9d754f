"""Ground explanations for equational clause sets.

A goal that does not follow from some axioms is explained by conditions over
a chosen set of abducible constants. The clause set is saturated by a
superposition prover that keeps abducibles abstract, the ground abducible
clauses are closed under resolution, and the minimal implicates are negated
into hypotheses.
"""

from .abduction import (
    EmptyAbducibleSet,
    EntailmentModeUnavailable,
    ExplainConfig,
    ImplicateReport,
    eq_axioms,
    explain,
    minimize_prime,
    resolution_closure,
)
from .oracle import InputUnsatisfiable, decide_sat, entails, enumerate_A_implicates
from .ordering import OrderingContext
from .problem import ProblemFile, parse, parse_clause
from .saturation import Limits, Status, saturate
from .terms import Clause, Fn, Literal, Var

__all__ = [
    "Clause", "Fn", "Literal", "Var",
    "OrderingContext", "Limits", "Status", "saturate",
    "ExplainConfig", "ImplicateReport", "explain", "eq_axioms",
    "resolution_closure", "minimize_prime",
    "EmptyAbducibleSet", "EntailmentModeUnavailable",
    "InputUnsatisfiable", "decide_sat", "entails", "enumerate_A_implicates",
    "ProblemFile", "parse", "parse_clause",
]
