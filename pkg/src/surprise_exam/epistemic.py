"""Epistemic formalization: the announcement, knowledge rules and the contradiction.

Agent k is "the students on the eve of day k". The announcement for m days
is the conjunction over k of ``k -> (~Kk k & Kk ~1 & ... & Kk ~(k-1))``
followed by ``1 | ... | m``. The hypothesis is the knowledge tower
``K1 K2 ... Km (announcement)``, which at m = 2 is ``Ka Kb (announcement)``.

Rules (TAUT and MP are always on):

- ``HYP``      the declared hypothesis
- ``KD_conj``  from ``Ka (A & B)`` infer ``Ka A`` or ``Ka B``; with no
  premises, the schema ``Ka (A & B) -> Ka A`` (or ``Ka B``)
- ``KD_mp``    from ``Ka (A -> B)`` and ``Ka A`` infer ``Ka B``; with no
  premises, the schema ``Ka (A -> B) -> (Ka A -> Ka B)``
- ``KE``       the schema ``Ka A -> A``
- ``KI``       ``Ka A`` for an embedded sub-proof of ``A`` with no HYP step
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .formula.proof import Bindings, Proof, ProofBuilder, Step
from .formula.tree import (
    And,
    CodePred,
    DayAtom,
    Falsum,
    Formula,
    Implies,
    Know,
    Not,
    conj_chain,
    disj_chain,
    implication_chain,
    rename_agents,
    subformulas,
)
from .selfref.kernel import HYP, MP, TAUT, CheckReport, Kernel, Rejected

KD_CONJ, KD_MP, KI, KE = "KD_conj", "KD_mp", "KI", "KE"
ALL_RULES = frozenset({KD_CONJ, KD_MP, KI, KE, HYP})
BASE_RULES = frozenset({TAUT, MP})
STUDENTS = ("Art", "Bob", "Carl", "Don", "Eric")


def default_agents(m: int) -> tuple[str, ...]:
    """Eve-of-day labels: ``a``, ``b`` for the two-day week, otherwise ``1`` ... ``m``."""
    if m == 2:
        return ("a", "b")
    return tuple(str(k) for k in range(1, m + 1))


class EpistemicError(ValueError):
    pass


@dataclass(frozen=True)
class EpistemicSystem:
    m: int
    agents: tuple[str, ...] = ()
    rules: frozenset[str] = ALL_RULES

    def __post_init__(self) -> None:
        if self.m < 1:
            raise EpistemicError("need at least one day")
        if not self.agents:
            object.__setattr__(self, "agents", default_agents(self.m))
        if len(self.agents) != self.m or len(set(self.agents)) != self.m:
            raise EpistemicError("need exactly one distinct agent per day")
        if not self.rules <= ALL_RULES:
            raise EpistemicError(f"unknown rules: {sorted(self.rules - ALL_RULES)}")

    @classmethod
    def students(cls, m: int = 5) -> EpistemicSystem:
        if m > len(STUDENTS):
            raise EpistemicError(f"the student preset has {len(STUDENTS)} names")
        return cls(m, STUDENTS[:m])

    def without(self, *rules: str) -> EpistemicSystem:
        return EpistemicSystem(self.m, self.agents, self.rules - set(rules))

    def K(self, day: int, body: Formula) -> Know:
        return Know(self.agents[day - 1], body)

    @property
    def announcement(self) -> Formula:
        return build_announcement(self).formula

    def tower(self, start: int = 1) -> Formula:
        """``K_start (K_start+1 (... K_m (announcement)))``; start = m + 1 is the announcement."""
        f = self.announcement
        for day in range(self.m, start - 1, -1):
            f = self.K(day, f)
        return f

    @property
    def hypothesis(self) -> Formula:
        return self.tower(1)

    def to_json(self) -> dict[str, Any]:
        return {"m": self.m, "agents": list(self.agents), "rules": sorted(self.rules)}


@dataclass(frozen=True)
class Announcement:
    m: int
    formula: Formula
    conjuncts: tuple[Formula, ...] = field(default=(), compare=False)
    disjunction: Formula | None = field(default=None, compare=False)


def build_announcement(sys: EpistemicSystem) -> Announcement:
    conjuncts = []
    for k in range(1, sys.m + 1):
        parts = [Not(sys.K(k, DayAtom(k)))] + [sys.K(k, Not(DayAtom(j))) for j in range(1, k)]
        conjuncts.append(Implies(DayAtom(k), conj_chain(parts)))
    disjunction = disj_chain([DayAtom(k) for k in range(1, sys.m + 1)])
    formula = conj_chain(conjuncts + [disjunction])
    return Announcement(sys.m, formula, tuple(conjuncts), disjunction)


def system_from_announcement(f: Formula, rules: frozenset[str] = ALL_RULES) -> EpistemicSystem:
    """Recover days and agents from an announcement formula."""
    original = f
    items: list[Formula] = []
    while isinstance(f, And):
        items.append(f.f2)
        f = f.f1
    items.append(f)
    items.reverse()
    m = len(items) - 1
    agents = []
    for k, item in enumerate(items[:-1], 1):
        body = item.f2 if isinstance(item, Implies) else None
        while isinstance(body, And):
            body = body.f1
        if not (isinstance(body, Not) and isinstance(body.f, Know)):
            raise EpistemicError("not an announcement formula")
        agents.append(body.f.agent)
    if m < 1:
        raise EpistemicError("not an announcement formula")
    try:
        sys = EpistemicSystem(m, tuple(agents), rules)
    except EpistemicError:
        raise EpistemicError("not an announcement formula") from None
    if sys.announcement != original:
        raise EpistemicError("not an announcement formula")
    return sys


# kernel


class EpistemicKernel(Kernel):
    def __init__(self, sys: EpistemicSystem):
        super().__init__(sys.rules | BASE_RULES)
        self.sys = sys

    def fragment(self, f: Formula) -> str | None:
        for g in subformulas(f):
            if isinstance(g, CodePred):
                return "predicate atoms are outside the modal fragment"
            if isinstance(g, DayAtom) and g.k > self.sys.m:
                return f"day {g.k} is beyond the {self.sys.m}-day horizon"
            if isinstance(g, Know) and g.agent not in self.sys.agents:
                return f"unknown agent {g.agent!r}"
        return None

    def rule_HYP(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        if premises or step.formula != self.sys.hypothesis:
            raise Rejected("HYP must state the declared hypothesis")

    def rule_KE(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        f = step.formula
        if premises:
            raise Rejected("KE is an axiom schema and takes no premises")
        if not (isinstance(f, Implies) and isinstance(f.f1, Know) and f.f1.body == f.f2):
            raise Rejected("not an instance of Ka A -> A")

    def rule_KD_conj(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        f = step.formula
        if not premises:
            if not isinstance(f, Implies):
                raise Rejected("KD_conj schema must have the form Ka (A & B) -> Ka A")
            source, f = f.f1, f.f2
        elif len(premises) == 1:
            source = premises[0]
        else:
            raise Rejected("KD_conj takes at most one premise")
        if not (
            isinstance(source, Know)
            and isinstance(source.body, And)
            and isinstance(f, Know)
            and f.agent == source.agent
            and f.body in (source.body.f1, source.body.f2)
        ):
            raise Rejected("conclusion is not a known conjunct of a known conjunction")

    def rule_KD_mp(self, step: Step, premises: list[Formula]) -> None:
        self.no_subproofs(step)
        f = step.formula
        if not premises:
            if not (isinstance(f, Implies) and isinstance(f.f2, Implies)):
                raise Rejected("KD_mp schema must have the form Ka (A -> B) -> (Ka A -> Ka B)")
            imp, arg, f = f.f1, f.f2.f1, f.f2.f2
        elif len(premises) == 2:
            imp, arg = premises
            if isinstance(arg, Know) and isinstance(arg.body, Implies) and not (
                isinstance(imp, Know) and isinstance(imp.body, Implies) and imp.body.f1 == arg.body
            ):
                imp, arg = arg, imp
        else:
            raise Rejected("KD_mp takes zero or two premises")
        ok = (
            isinstance(imp, Know)
            and isinstance(imp.body, Implies)
            and isinstance(arg, Know)
            and isinstance(f, Know)
            and imp.agent == arg.agent == f.agent
            and imp.body.f1 == arg.body
            and imp.body.f2 == f.body
        )
        if not ok:
            raise Rejected("premises do not have the form Ka (A -> B) and Ka A")

    def rule_KI(self, step: Step, premises: list[Formula]) -> None:
        f = step.formula
        if premises or len(step.subproofs) != 1:
            raise Rejected("KI takes no premises and exactly one sub-proof")
        sub = step.subproofs[0]
        if any(s.rule == HYP for s in sub.walk()):
            raise Rejected("KI sub-proof depends on a hypothesis")
        if not isinstance(f, Know) or f.body != sub.conclusion:
            raise Rejected("KI conclusion must be Ka A for the sub-proof's conclusion A")
        self.verify_sub(sub)


def check(proof: Proof, sys: EpistemicSystem) -> CheckReport:
    return EpistemicKernel(sys).check(proof)


# derivations


class _Deriver:
    """Builds hypothesis-free lemmas ``T_j -> ~j`` (T_j the tower from day j)."""

    def __init__(self, sys: EpistemicSystem):
        self.sys = sys
        self.A = sys.announcement
        self._lemmas: dict[int, Proof] = {}

    def T(self, j: int) -> Formula:
        return self.sys.tower(j)

    def know_from_theorem(self, b: ProofBuilder, day: int, theorem: Proof) -> int:
        """``K_day (X -> Y)`` by KI, then the KD_mp schema and MP give ``K_day X -> K_day Y``."""
        imp = theorem.conclusion
        ki = b.add(self.sys.K(day, imp), KI, subproofs=[theorem])
        schema = Implies(
            self.sys.K(day, imp), Implies(self.sys.K(day, imp.f1), self.sys.K(day, imp.f2))
        )
        s = b.add(schema, KD_MP)
        return b.add(schema.f2, MP, ki, s)

    def tower_descent(self, i: int, k: int) -> Proof:
        """Hypothesis-free ``T_i -> T_k`` for i < k <= m + 1, by KE steps."""
        b = ProofBuilder()
        links = [b.add(Implies(self.T(j), self.T(j + 1)), KE) for j in range(i, k)]
        if len(links) == 1:
            return b.build()
        chain = [b.formula(n) for n in links]
        taut = b.add(implication_chain(chain, Implies(self.T(i), self.T(k))), TAUT)
        cur = taut
        for n in links:
            cur = b.add(b.formula(cur).f2, MP, n, cur)
        return b.build()

    def reach(self, i: int, k: int) -> Proof:
        """Hypothesis-free ``T_i -> ~k`` for i <= k <= m."""
        if i == k:
            return self.lemma(k)
        b = ProofBuilder()
        down = b.include(self.tower_descent(i, k))
        lem = b.include(self.lemma(k))
        goal = Implies(self.T(i), Not(DayAtom(k)))
        t = b.add(Implies(b.formula(down), Implies(b.formula(lem), goal)), TAUT)
        t = b.add(b.formula(t).f2, MP, down, t)
        b.add(goal, MP, lem, t)
        return b.build()

    def lemma(self, j: int) -> Proof:
        """``K_j (K_j+1 ... (announcement)) -> ~j`` with no hypotheses."""
        if j in self._lemmas:
            return self._lemmas[j]
        sys, m = self.sys, self.sys.m
        ann = build_announcement(sys)
        b = ProofBuilder()
        facts: list[int] = []
        Tj = self.T(j)
        # T_j -> K_j ~k for every later day k
        for k in range(j + 1, m + 1):
            facts.append(self.know_from_theorem(b, j, self.reach(j + 1, k)))
        # T_j -> K_j A
        if j < m:
            facts.append(self.know_from_theorem(b, j, self.tower_descent(j + 1, m + 1)))
        KjA = sys.K(j, self.A)
        facts.append(b.add(Implies(KjA, self.A), KE))
        facts.append(b.add(Implies(KjA, sys.K(j, ann.disjunction)), KD_CONJ))
        # K_j (1 | ... | m) and K_j ~i for i != j give K_j j
        others = [Not(DayAtom(i)) for i in range(1, m + 1) if i != j]
        case = Implies(ann.disjunction, implication_chain(others, DayAtom(j)))
        tb = ProofBuilder()
        tb.add(case, TAUT)
        cur_body = case
        facts.append(self.know_from_theorem(b, j, tb.build()))
        for other in others:
            rest = cur_body.f2
            schema = Implies(sys.K(j, cur_body.f2), Implies(sys.K(j, other), sys.K(j, rest.f2)))
            facts.append(b.add(schema, KD_MP))
            cur_body = rest
        goal = Implies(Tj, Not(DayAtom(j)))
        t = b.add(implication_chain([b.formula(n) for n in facts], goal), TAUT)
        for n in facts[:-1]:
            t = b.add(b.formula(t).f2, MP, n, t)
        b.add(goal, MP, facts[-1], t, label=f"lemma {j}")
        proof = b.build()
        self._lemmas[j] = proof
        return proof


def bindings(sys: EpistemicSystem) -> Bindings:
    """Transcript abbreviation ``A`` for the announcement."""
    return Bindings({}, {"A": sys.announcement})


def derive_elimination_lemma(sys: EpistemicSystem) -> Proof:
    """``K_m (announcement) -> ~m``: the last day is excluded by whoever knows the announcement on its eve."""
    if sys.m < 2:
        raise EpistemicError("the elimination lemma needs at least two days")
    return _Deriver(sys).lemma(sys.m)


def derive_contradiction(sys: EpistemicSystem) -> Proof:
    """``false`` from the knowledge tower, following the two-day argument step for step at m = 2.

    Day 1's agent learns ``~k`` for each later day through KI applied to the
    elimination lemmas, learns the announcement through KI applied to KE,
    concludes ``K1 1``, and factivity turns that into ``1`` and ``~K1 1``.
    """
    d = _Deriver(sys)
    m = sys.m
    K1 = lambda body: sys.K(1, body)  # noqa: E731
    ann = build_announcement(sys)
    b = ProofBuilder()
    hyp = b.add(sys.hypothesis, HYP)
    excluded = []
    for k in range(2, m + 1):
        ki = b.add(K1(Implies(d.T(2), Not(DayAtom(k)))), KI, subproofs=[d.reach(2, k)])
        excluded.append(b.add(K1(Not(DayAtom(k))), KD_MP, ki, hyp))
    if m == 1:
        knows_ann = hyp
    else:
        ki = b.add(K1(Implies(d.T(2), d.A)), KI, subproofs=[d.tower_descent(2, m + 1)])
        knows_ann = b.add(K1(d.A), KD_MP, ki, hyp)
    knows_disj = b.add(K1(ann.disjunction), KD_CONJ, knows_ann)
    if m == 1:
        knows_one = knows_disj
    else:
        others = [Not(DayAtom(k)) for k in range(2, m + 1)]
        case = Implies(ann.disjunction, implication_chain(others, DayAtom(1)))
        tb = ProofBuilder()
        tb.add(case, TAUT)
        cur = b.add(K1(case), KI, subproofs=[tb.build()])
        cur = b.add(K1(case.f2), KD_MP, cur, knows_disj)
        body = case.f2
        for other, ex in zip(others, excluded):
            cur = b.add(K1(body.f2), KD_MP, cur, ex)
            body = body.f2
        knows_one = cur
    factive_ann = b.add(Implies(K1(d.A), d.A), KE)
    ann_holds = b.add(d.A, MP, knows_ann, factive_ann)
    if m == 1:
        # the announcement already asserts 1, so factivity of K1 1 is not needed
        clash = Implies(d.A, Implies(K1(DayAtom(1)), Falsum()))
        t = b.add(clash, TAUT)
        t = b.add(clash.f2, MP, ann_holds, t)
    else:
        factive_one = b.add(Implies(K1(DayAtom(1)), DayAtom(1)), KE)
        one = b.add(DayAtom(1), MP, knows_one, factive_one)
        clash = Implies(d.A, Implies(DayAtom(1), Implies(K1(DayAtom(1)), Falsum())))
        t = b.add(clash, TAUT)
        t = b.add(clash.f2, MP, ann_holds, t)
        t = b.add(clash.f2.f2, MP, one, t)
    b.add(Falsum(), MP, knows_one, t)
    return b.build()


def relabel(proof: Proof, mapping: dict[str, str]) -> Proof:
    """Rename agents throughout a proof, sub-proofs included."""
    return Proof(
        tuple(
            Step(
                rename_agents(s.formula, mapping),
                s.rule,
                s.premises,
                tuple(relabel(sub, mapping) for sub in s.subproofs),
                s.label,
            )
            for s in proof.steps
        )
    )
