"""Self-referential sentences: Fitch's announcement and the Knower paradox."""

from .fitch import ConstructionError, FitchConstruction, build_fitch, derive_refutation
from .kernel import FITCH, KNOWER, RULE_SETS, CheckReport, RuleSet, check, is_tautology
from .knower import KnowerConstruction, build_knower, derive_knower_contradiction

__all__ = [
    "FITCH", "KNOWER", "RULE_SETS", "CheckReport", "ConstructionError",
    "FitchConstruction", "KnowerConstruction", "RuleSet", "build_fitch",
    "build_knower", "check", "derive_knower_contradiction", "derive_refutation",
    "is_tautology",
]
