"""The Knower paradox: a factive, self-applicable knowledge predicate ``K``
together with the diagonal sentence ``S <-> K[#~S]`` is inconsistent."""

from __future__ import annotations

from dataclasses import dataclass

from ..formula.proof import Bindings, Proof, ProofBuilder
from ..formula.tree import X, CodePred, D, Falsum, Formula, Iff, Implies, Neg, Not, Numeral, substitute
from ..godel import encode
from .kernel import AXIOM_B, EVAL, MP, RULE_C, SCHEMA_A, TAUT

OPEN_KNOWER = CodePred("K", Neg(D(X, X)))


@dataclass(frozen=True)
class KnowerConstruction:
    h: int
    sentence: Formula

    @property
    def negation_code(self) -> int:
        return encode(Not(self.sentence))

    @property
    def schema_instance(self) -> Formula:
        """``K[#~S] -> ~S``."""
        return Implies(CodePred("K", Numeral(self.negation_code)), Not(self.sentence))

    def bindings(self) -> Bindings:
        return Bindings(
            {"h": self.h, "k": self.negation_code, "a": encode(self.schema_instance)},
            {"S": self.sentence},
        )


def build_knower() -> KnowerConstruction:
    """``S = K[Neg D(h,h)]`` where ``h`` codes ``K[Neg D(x,x)]``."""
    h = encode(OPEN_KNOWER)
    return KnowerConstruction(h, substitute(OPEN_KNOWER, h))


def derive_knower_contradiction(kc: KnowerConstruction | None = None) -> Proof:
    kc = kc or build_knower()
    s = kc.sentence
    known_neg = CodePred("K", Numeral(kc.negation_code))
    b = ProofBuilder()
    # the factivity instance, bridged to S, gives ~S
    inst = b.add(kc.schema_instance, SCHEMA_A, label="A")
    ev = b.add(Iff(s, known_neg), EVAL)
    t = b.add(Implies(kc.schema_instance, Implies(Iff(s, known_neg), Not(s))), TAUT)
    t = b.add(b.formula(t).f2, MP, inst, t)
    not_s = b.add(Not(s), MP, ev, t)
    # the instance is itself known, and ~S follows from it by an explicit proof
    axiom = b.add(CodePred("K", Numeral(encode(kc.schema_instance))), AXIOM_B, label="B")
    knows = b.add(known_neg, RULE_C, axiom, subproofs=[b.snapshot().prefix(not_s)], label="C")
    t = b.add(Implies(Iff(s, known_neg), Implies(known_neg, s)), TAUT)
    t = b.add(b.formula(t).f2, MP, ev, t)
    yes_s = b.add(s, MP, knows, t)
    t = b.add(Implies(s, Implies(Not(s), Falsum())), TAUT)
    t = b.add(b.formula(t).f2, MP, yes_s, t)
    b.add(Falsum(), MP, not_s, t)
    return b.build()
