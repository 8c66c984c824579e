"""Proof kernel for the code-predicate systems (Fitch, Knower).

The generic :class:`Kernel` walks a transcript, checks that each rule is
enabled and that premise references point backwards, and dispatches to a
``rule_<NAME>`` method. TAUT and MP live here; subclasses add the rest.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from typing import Callable

from ..formula.proof import Proof, Step
from ..formula.syntax import to_text
from ..formula.tree import (
    And,
    CodePred,
    DayAtom,
    Falsum,
    Formula,
    Iff,
    Implies,
    Know,
    Not,
    Numeral,
    Or,
    Xor,
    subformulas,
)
from ..godel import CodeError, FragmentError, decode, encode, eval_term

TAUT, MP, EVAL, NEC = "TAUT", "MP", "EVAL", "NEC"
SCHEMA_A, AXIOM_B, RULE_C = "SCHEMA_A", "AXIOM_B", "RULE_C"
HYP = "HYP"


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: frozenset[str]
    labels: frozenset[str] = frozenset()

    def without(self, *rules: str) -> RuleSet:
        return replace(self, rules=self.rules - set(rules))

    def restricted(self, rules: set[str] | frozenset[str]) -> RuleSet:
        return replace(self, rules=self.rules & frozenset(rules))


FITCH = RuleSet("fitch", frozenset({TAUT, MP, EVAL, NEC}), frozenset({"P"}))
KNOWER = RuleSet(
    "knower", frozenset({TAUT, MP, EVAL, SCHEMA_A, AXIOM_B, RULE_C}), frozenset({"K"})
)
RULE_SETS = {"fitch": FITCH, "knower": KNOWER}
RULE_C_INNER = frozenset({TAUT, MP, EVAL, SCHEMA_A})


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    step: str | None = None
    rule: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "accepted"
        return f"rejected at step {self.step} [{self.rule}]: {self.reason}"


class Rejected(Exception):
    def __init__(self, reason: str, path: tuple[int, ...] = (), rule: str | None = None):
        super().__init__(reason)
        self.reason = reason
        self.path = path
        self.rule = rule


# propositional tautologies over opaque atoms

_BIN = {And: "&", Or: "|", Xor: "^", Implies: ">", Iff: "="}


def _neg(a):
    return (not a) if isinstance(a, bool) else ("~", a)


def _combine(op: str, a, b):
    if op == "&":
        if a is False or b is False:
            return False
        if a is True:
            return b
        return a if b is True else ("&", a, b)
    if op == "|":
        if a is True or b is True:
            return True
        if a is False:
            return b
        return a if b is False else ("|", a, b)
    if op == ">":
        if a is False or b is True:
            return True
        if a is True:
            return b
        return _neg(a) if b is False else (">", a, b)
    # '=' and '^'
    flip = op == "^"
    if isinstance(a, bool) and isinstance(b, bool):
        return (a == b) != flip
    if isinstance(a, bool):
        a, b = b, a
    if isinstance(b, bool):
        return a if b != flip else _neg(a)
    return (op, a, b)


def _skeleton(f: Formula, atoms: dict[Formula, int]):
    if isinstance(f, Falsum):
        return False
    if isinstance(f, (DayAtom, CodePred, Know)):
        return ("v", atoms.setdefault(f, len(atoms)))
    if isinstance(f, Not):
        return _neg(_skeleton(f.f, atoms))
    return _combine(_BIN[type(f)], _skeleton(f.f1, atoms), _skeleton(f.f2, atoms))


def _assign(n, var: int, val: bool):
    if isinstance(n, bool):
        return n
    tag = n[0]
    if tag == "v":
        return val if n[1] == var else n
    if tag == "~":
        return _neg(_assign(n[1], var, val))
    return _combine(tag, _assign(n[1], var, val), _assign(n[2], var, val))


def _count(n, counter: Counter) -> None:
    while not isinstance(n, bool):
        if n[0] == "v":
            counter[n[1]] += 1
            return
        if n[0] == "~":
            n = n[1]
            continue
        _count(n[1], counter)
        n = n[2]


def _valid(n) -> bool:
    if isinstance(n, bool):
        return n
    counter: Counter = Counter()
    _count(n, counter)
    var = max(counter, key=lambda v: (counter[v], -v))
    return _valid(_assign(n, var, False)) and _valid(_assign(n, var, True))


def is_tautology(f: Formula) -> bool:
    """Truth-table validity with day atoms, predicate atoms and knowledge
    subformulas treated as opaque atoms (equal atoms share a variable).

    Rows are enumerated by case splitting on one atom at a time and folding
    constants, so a row set is abandoned as soon as the formula is decided.
    """
    return _valid(_skeleton(f, {}))


def atom_count(f: Formula) -> int:
    atoms: dict[Formula, int] = {}
    _skeleton(f, atoms)
    return len(atoms)


class Kernel:
    """Base checker: subclasses provide ``rule_<NAME>`` methods and ``fragment``."""

    def __init__(self, rules: frozenset[str]):
        self.rules = rules
        self._memo: dict[int, tuple[Proof, Rejected | None]] = {}

    def check(self, proof: Proof) -> CheckReport:
        try:
            self.verify(proof)
        except Rejected as r:
            path = ".".join(map(str, r.path)) or None
            return CheckReport(False, path, r.rule, r.reason)
        return CheckReport(True)

    def verify(self, proof: Proof) -> None:
        """Raise :class:`Rejected` unless every step is justified."""
        key = id(proof)
        if key in self._memo and self._memo[key][0] is proof:
            err = self._memo[key][1]
            if err is not None:
                raise Rejected(err.reason, err.path, err.rule)
            return
        err = None
        try:
            self._verify(proof)
        except Rejected as r:
            err = r
        self._memo[key] = (proof, err)
        if err is not None:
            raise err

    def _verify(self, proof: Proof) -> None:
        if not proof.steps:
            raise Rejected("empty proof")
        for i, step in enumerate(proof.steps, 1):
            try:
                self.check_step(proof, i, step)
            except Rejected as r:
                raise Rejected(r.reason, (i, *r.path), r.rule or step.rule) from None

    def check_step(self, proof: Proof, i: int, step: Step) -> None:
        if step.rule not in self.rules:
            raise Rejected(f"rule {step.rule} is not enabled", rule=step.rule)
        for p in step.premises:
            if not 1 <= p < i:
                raise Rejected(f"premise {p} does not point to an earlier step")
        problem = self.fragment(step.formula)
        if problem:
            raise Rejected(problem)
        method: Callable | None = getattr(self, f"rule_{step.rule}", None)
        if method is None:
            raise Rejected(f"unknown rule {step.rule}")
        premises = [proof.steps[p - 1].formula for p in step.premises]
        method(step, premises)

    def verify_sub(self, sub: Proof, kernel: Kernel | None = None) -> None:
        try:
            (kernel or self).verify(sub)
        except Rejected as r:
            reason = r.reason if r.reason.startswith("sub-proof: ") else f"sub-proof: {r.reason}"
            raise Rejected(reason, r.path, r.rule) from None

    def fragment(self, f: Formula) -> str | None:
        return None

    @staticmethod
    def no_subproofs(step: Step) -> None:
        if step.subproofs:
            raise Rejected(f"{step.rule} takes no sub-proof")

    def rule_TAUT(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        if premises:
            raise Rejected("TAUT takes no premises")
        if not is_tautology(step.formula):
            raise Rejected("not a propositional tautology")

    def rule_MP(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        if len(premises) != 2:
            raise Rejected("MP needs exactly two premises")
        a, b = premises
        if b == Implies(a, step.formula) or a == Implies(b, step.formula):
            return
        raise Rejected("premises do not have the form A -> B and A")


def _no_hyp(proof: Proof) -> bool:
    return all(s.rule != HYP for s in proof.walk())


class CodeKernel(Kernel):
    """Checks Fitch and Knower proofs: TAUT, MP, EVAL, NEC, SCHEMA_A, AXIOM_B, RULE_C."""

    def __init__(self, ruleset: RuleSet):
        super().__init__(ruleset.rules)
        self.ruleset = ruleset

    def fragment(self, f: Formula) -> str | None:
        for g in subformulas(f):
            if isinstance(g, Know):
                return "knowledge operator outside the self-reference fragment"
            if isinstance(g, CodePred) and g.label not in self.ruleset.labels:
                return f"predicate {g.label} is not declared in the {self.ruleset.name} system"
        return None

    def rule_EVAL(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        f = step.formula
        if premises:
            raise Rejected("EVAL takes no premises")
        if not (
            isinstance(f, Iff)
            and isinstance(f.f1, CodePred)
            and isinstance(f.f2, CodePred)
            and f.f1.label == f.f2.label
            and isinstance(f.f2.t, Numeral)
        ):
            raise Rejected("EVAL conclusion must have the form L[t] <-> L[n]")
        if not f.f1.t.closed:
            raise Rejected("EVAL term is open")
        try:
            value = eval_term(f.f1.t)
        except CodeError as e:
            raise Rejected(f"evaluation failed: {e}") from None
        if value != f.f2.t.value:
            raise Rejected("evaluation mismatch")

    def _coded_conclusion(self, step: Step, label: str) -> int:
        f = step.formula
        if not (isinstance(f, CodePred) and f.label == label and isinstance(f.t, Numeral)):
            raise Rejected(f"{step.rule} conclusion must have the form {label}[n]")
        return f.t.value

    def _sub_conclusion_code(self, sub: Proof) -> int:
        try:
            return encode(sub.conclusion)
        except FragmentError as e:
            raise Rejected(str(e)) from None

    def rule_NEC(self, step: Step, premises: list[Formula]) -> None:
        n = self._coded_conclusion(step, "P")
        if premises or len(step.subproofs) != 1:
            raise Rejected("NEC takes no premises and exactly one sub-proof")
        sub = step.subproofs[0]
        if not _no_hyp(sub):
            raise Rejected("NEC sub-proof depends on a hypothesis")
        self.verify_sub(sub)
        if self._sub_conclusion_code(sub) != n:
            raise Rejected("sub-proof conclusion does not have code n")

    @staticmethod
    def _schema_a_instance(f: Formula) -> bool:
        if not (isinstance(f, Implies) and isinstance(f.f1, CodePred) and f.f1.label == "K"):
            return False
        if not isinstance(f.f1.t, Numeral):
            return False
        try:
            return encode(f.f2) == f.f1.t.value
        except FragmentError:
            return False

    def rule_SCHEMA_A(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        if premises:
            raise Rejected("SCHEMA_A takes no premises")
        if not self._schema_a_instance(step.formula):
            raise Rejected("not an instance of K[#Q] -> Q")

    def rule_AXIOM_B(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        n = self._coded_conclusion(step, "K")
        if premises:
            raise Rejected("AXIOM_B takes no premises")
        try:
            inner = decode(n)
        except CodeError:
            raise Rejected("n is not the code of a formula") from None
        if not self._schema_a_instance(inner):
            raise Rejected("n does not code an instance of K[#Q] -> Q")

    def rule_RULE_C(self, step: Step, premises: list[Formula]) -> None:
        n = self._coded_conclusion(step, "K")
        if len(step.subproofs) != 1:
            raise Rejected("RULE_C needs exactly one sub-proof")
        sub = step.subproofs[0]
        known = set()
        for p in premises:
            if not (isinstance(p, CodePred) and p.label == "K" and isinstance(p.t, Numeral)):
                raise Rejected("RULE_C premises must have the form K[n]")
            known.add(p.t.value)
        used = sub.rules_used()
        if not used <= RULE_C_INNER:
            bad = ", ".join(sorted(used - RULE_C_INNER))
            raise Rejected(f"RULE_C sub-proof uses rules outside TAUT/MP/EVAL/SCHEMA_A: {bad}")
        self.verify_sub(sub, CodeKernel(self.ruleset.restricted(RULE_C_INNER)))
        for s in sub.walk():
            if s.rule == SCHEMA_A and encode(s.formula) not in known:
                raise Rejected(
                    f"sub-proof uses {to_text(s.formula)} without a premise that it is known"
                )
        if self._sub_conclusion_code(sub) != n:
            raise Rejected("sub-proof conclusion does not have code n")


def check(proof: Proof, ruleset: RuleSet = FITCH) -> CheckReport:
    return CodeKernel(ruleset).check(proof)
