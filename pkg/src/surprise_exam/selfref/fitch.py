"""Fitch's self-referential announcement for an m-day week and its refutation.

Disjunct k of the announcement says "the exam is on day k, and the
implication (S & ~Q1 & ... & ~Q(k-1)) -> Qk is unprovable", where S is the
announcement itself, reached through the diagonal term ``D(x,x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any

from ..formula.proof import Bindings, Proof, ProofBuilder
from ..formula.syntax import Printer, term_to_text
from ..formula.tree import (
    X,
    And,
    CodePred,
    Conj,
    D,
    DayAtom,
    Formula,
    Iff,
    Imp,
    Implies,
    Neg,
    Not,
    Numeral,
    Or,
    Term,
    Xor,
    conj_chain,
    disj_chain,
    implication_chain,
    substitute,
    substitute_term,
)
from ..godel import encode
from .kernel import EVAL, MP, NEC, TAUT

CONNECTIVES = {"or": Or, "xor": Xor}


class ConstructionError(ValueError):
    pass


def day_term(k: int, day_codes: list[int], diagonal: Term = D(X, X)) -> Term:
    """``(D(x,x) Conj Neg q1 ... Conj Neg q(k-1)) Imp qk``."""
    left = diagonal
    for j in range(1, k):
        left = Conj(left, Neg(Numeral(day_codes[j - 1])))
    return Imp(left, Numeral(day_codes[k - 1]))


@dataclass(frozen=True)
class FitchConstruction:
    m: int
    connective: str
    open_formula: Formula
    h: int
    sentence: Formula
    day_codes: tuple[int, ...]
    terms: tuple[Term, ...]

    def elimination(self, k: int) -> Formula:
        """``(S & ~Q1 & ... & ~Q(k-1)) -> Qk``, the implication coded by term k."""
        hyps = [self.sentence] + [Not(DayAtom(j)) for j in range(1, k)]
        return Implies(conj_chain(hyps), DayAtom(k))

    def unprovable_atom(self, k: int) -> CodePred:
        return CodePred("P", self.terms[k - 1])

    @cached_property
    def step_codes(self) -> dict[int, int]:
        return {k: encode(self.elimination(k)) for k in range(1, self.m + 1)}

    def step_names(self) -> dict[int, str]:
        if self.m == 2:
            return {2: "a", 1: "b"}
        return {k: f"e{k}" for k in range(1, self.m + 1)}

    def bindings(self) -> Bindings:
        numerals = {f"q{k}": c for k, c in enumerate(self.day_codes, 1)}
        numerals["h"] = self.h
        for k, name in sorted(self.step_names().items(), key=lambda kv: -kv[0]):
            numerals[name] = self.step_codes[k]
        return Bindings(numerals, {"S": self.sentence})

    def to_json(self) -> dict[str, Any]:
        names = {v: k for k, v in self.bindings().numerals.items()}
        return {
            "m": self.m,
            "connective": self.connective,
            "h": str(self.h),
            "sentence": Printer(False, names)(self.sentence),
            "open_formula": Printer(False, names)(self.open_formula),
            "terms": [term_to_text(t, names) for t in self.terms],
            "day_codes": [str(c) for c in self.day_codes],
        }


def build_fitch(m: int, connective: str = "or") -> FitchConstruction:
    if m < 1:
        raise ConstructionError("need at least one day")
    if connective not in CONNECTIVES:
        raise ConstructionError(f"unknown connective {connective!r}")
    if connective == "xor" and m > 2:
        raise ConstructionError("exclusive-or announcement is only defined for m <= 2")
    day_codes = [encode(DayAtom(k)) for k in range(1, m + 1)]
    disjuncts = [
        And(DayAtom(k), Not(CodePred("P", day_term(k, day_codes)))) for k in range(1, m + 1)
    ]
    open_formula = disj_chain(disjuncts, CONNECTIVES[connective])
    h = encode(open_formula)
    sentence = substitute(open_formula, h)
    terms = tuple(substitute_term(day_term(k, day_codes), h) for k in range(1, m + 1))
    return FitchConstruction(m, connective, open_formula, h, sentence, tuple(day_codes), terms)


def derive_refutation(fc: FitchConstruction) -> Proof:
    """Proof of ``~S``: eliminate day m, then m-1, ..., then day 1.

    Each elimination implication is proved, necessitated into ``P[n]``, and
    bridged by EVAL to the unprovability claim inside S.
    """
    b = ProofBuilder()
    labels = {2: "1", 1: "2"} if fc.m == 2 else {k: f"day {k}" for k in range(1, fc.m + 1)}
    proved: dict[int, int] = {}
    for k in range(fc.m, 0, -1):
        target = fc.elimination(k)
        label = labels[k]
        later = [fc.unprovable_atom(j) for j in range(k + 1, fc.m + 1)]
        if not later:
            b.add(target, TAUT, label=label)
        else:
            cur = b.add(implication_chain(later, target), TAUT)
            for j in range(k + 1, fc.m + 1):
                rest = b.formula(cur).f2
                cur = b.add(rest, MP, proved[j], cur, label=label if j == fc.m else None)
        code = fc.step_codes[k]
        pk = fc.unprovable_atom(k)
        pn = CodePred("P", Numeral(code))
        nec = b.add(pn, NEC, subproofs=[b.snapshot()])
        ev = b.add(Iff(pk, pn), EVAL)
        bridge = b.add(Implies(Iff(pk, pn), Implies(pn, pk)), TAUT)
        flipped = b.add(Implies(pn, pk), MP, ev, bridge)
        proved[k] = b.add(pk, MP, nec, flipped)
    atoms = [fc.unprovable_atom(k) for k in range(1, fc.m + 1)]
    cur = b.add(implication_chain(atoms, Not(fc.sentence)), TAUT)
    for k in range(1, fc.m + 1):
        cur = b.add(b.formula(cur).f2, MP, proved[k], cur)
    return b.build()
