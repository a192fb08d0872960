"""Executable elimination of the Lebesgue measure functional from terms of
higher-order arithmetic."""
from . import arith  # noqa: F401  registers library terms and jets
from .continuity import branch_evaluate, majorize, static_modulus_bound, uniform_modulus
from .dyadic import Dyadic, cantor_to_unit
from .errors import (BudgetExhausted, DanglingFreeVariable, IllTyped, LebmineError,
                     NonArithmetical, NonEliminable, ParseError, TypeMismatch,
                     UnassignedVariable, UnsupportedConstant, UnsupportedTerm)
from .evaluate import evaluate, mu_eval
from .measure import (epsilon_select, measure_arithmetical, measure_bruteforce,
                      measure_clopen, semantic_machine)
from .normalizer import normalize_degree3, replace_occurrences
from .parser import parse_term, parse_type
from .pipeline import eliminate_lambda
from .terms import EvalBudget, normalize, reduce_step, show, typecheck
from .types import GROUND, Arrow, degree, pure

__all__ = [
    "Arrow", "BudgetExhausted", "DanglingFreeVariable", "Dyadic", "EvalBudget", "GROUND",
    "IllTyped", "LebmineError", "NonArithmetical", "NonEliminable", "ParseError",
    "TypeMismatch", "UnassignedVariable", "UnsupportedConstant", "UnsupportedTerm",
    "branch_evaluate", "cantor_to_unit", "degree", "eliminate_lambda", "epsilon_select",
    "evaluate", "majorize", "measure_arithmetical", "measure_bruteforce", "measure_clopen",
    "mu_eval", "normalize", "normalize_degree3", "parse_term", "parse_type", "pure",
    "reduce_step", "replace_occurrences", "semantic_machine", "show",
    "static_modulus_bound", "typecheck", "uniform_modulus",
]
