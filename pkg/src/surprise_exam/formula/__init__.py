"""Object-language syntax shared by every deduction module."""

from .proof import Bindings, Proof, ProofBuilder, Step, TranscriptError
from .syntax import ParseError, parse, parse_term, term_to_text, to_text
from .tree import (
    D,
    FALSUM,
    X,
    And,
    CodePred,
    Conj,
    DayAtom,
    Falsum,
    Formula,
    Iff,
    Imp,
    Implies,
    Know,
    Neg,
    Not,
    Numeral,
    Or,
    Term,
    Var,
    Xor,
    conj_chain,
    disj_chain,
    implication_chain,
    is_closed,
    rename_agents,
    size,
    substitute,
    substitute_term,
    subformulas,
)

__all__ = [
    "And", "Bindings", "CodePred", "Conj", "D", "DayAtom", "FALSUM", "Falsum",
    "Formula", "Iff", "Imp", "Implies", "Know", "Neg", "Not", "Numeral", "Or",
    "ParseError", "Proof", "ProofBuilder", "Step", "Term", "TranscriptError",
    "Var", "X", "Xor", "conj_chain", "disj_chain", "implication_chain",
    "is_closed", "parse", "parse_term", "rename_agents", "size", "subformulas",
    "substitute", "substitute_term", "term_to_text", "to_text",
]
