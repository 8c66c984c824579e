import itertools

import pytest
from hypothesis import given

from conftest import propositional
from surprise_exam.formula import (
    And,
    CodePred,
    DayAtom,
    Falsum,
    Iff,
    Implies,
    Know,
    Not,
    Numeral,
    Or,
    Xor,
    parse,
    to_text,
)
from surprise_exam.formula.proof import Proof, ProofBuilder, Step
from surprise_exam.godel import check_proof_code, decode, diag, encode, eval_term, proof_code
from surprise_exam.selfref import (
    FITCH,
    KNOWER,
    ConstructionError,
    build_fitch,
    build_knower,
    check,
    derive_knower_contradiction,
    derive_refutation,
    is_tautology,
)
from surprise_exam.selfref.kernel import NEC, RULE_C, atom_count

ALLOWED = [(m, "or") for m in range(1, 6)] + [(1, "xor"), (2, "xor")]


# truth-table oracle


def _atoms(f, out):
    if isinstance(f, (DayAtom, CodePred, Know)):
        out.setdefault(f, len(out))
    elif isinstance(f, Not):
        _atoms(f.f, out)
    elif not isinstance(f, Falsum):
        _atoms(f.f1, out)
        _atoms(f.f2, out)
    return out


def _value(f, row):
    if isinstance(f, Falsum):
        return False
    if f in row:
        return row[f]
    if isinstance(f, Not):
        return not _value(f.f, row)
    a, b = _value(f.f1, row), _value(f.f2, row)
    return {And: a and b, Or: a or b, Xor: a != b, Implies: (not a) or b, Iff: a == b}[type(f)]


def brute_force_tautology(f):
    atoms = list(_atoms(f, {}))
    return all(
        _value(f, dict(zip(atoms, row)))
        for row in itertools.product([False, True], repeat=len(atoms))
    )


@given(propositional)
def test_tautology_checker_matches_truth_table(f):
    assert is_tautology(f) == brute_force_tautology(f)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Q1 | ~Q1", True),
        ("Q1 -> Q1 & Q1", True),
        ("(Q1 -> Q2) -> (~Q2 -> ~Q1)", True),
        ("Q1 xor Q1 <-> false", True),
        ("Q1 -> Q2", False),
        ("P[1] -> P[2]", False),
        ("P[1] -> P[1]", True),
    ],
)
def test_tautology_examples(text, expected):
    assert is_tautology(parse(text)) is expected


def test_generated_tautologies_agree_with_truth_table():
    for m in (1, 2, 3):
        for s in derive_refutation(build_fitch(m)).walk():
            if s.rule == "TAUT":
                assert brute_force_tautology(s.formula)


# Fitch construction


@pytest.mark.parametrize("m, connective", ALLOWED)
def test_fixed_point_is_bit_exact(m, connective):
    fc = build_fitch(m, connective)
    assert diag(fc.h, fc.h) == encode(fc.sentence)
    assert fc.h == encode(fc.open_formula)


@pytest.mark.parametrize("m, connective", ALLOWED)
def test_terms_evaluate_to_elimination_codes(m, connective):
    fc = build_fitch(m, connective)
    for k in range(1, m + 1):
        assert eval_term(fc.terms[k - 1]) == encode(fc.elimination(k))


def test_two_day_xor_open_formula_prints():
    fc = build_fitch(2, "xor")
    names = {v: k for k, v in fc.bindings().numerals.items()}
    assert to_text(fc.open_formula, numeral_names=names) == (
        "(Q1 & ~P[D(x,x) Imp q1]) xor (Q2 & ~P[(D(x,x) Conj Neg q1) Imp q2])"
    )


def test_one_day_sentence_shape():
    fc = build_fitch(1)
    assert fc.sentence == And(DayAtom(1), Not(CodePred("P", fc.terms[0])))


@pytest.mark.parametrize("m, connective", [(0, "or"), (3, "xor"), (2, "nand")])
def test_build_fitch_rejects(m, connective):
    with pytest.raises(ConstructionError):
        build_fitch(m, connective)


# refutation


@pytest.mark.parametrize("m, connective", ALLOWED)
def test_refutation_is_accepted(m, connective):
    fc = build_fitch(m, connective)
    p = derive_refutation(fc)
    assert check(p, FITCH).accepted
    assert p.conclusion == Not(fc.sentence)


def test_two_day_transcript_has_the_numbered_steps():
    fc = build_fitch(2, "xor")
    p = derive_refutation(fc)
    pr = fc.bindings().printer(False)
    one = p.steps[p.find_label("1") - 1]
    two = p.steps[p.find_label("2") - 1]
    assert pr(one.formula) == "(S & ~Q1) -> Q2"
    assert pr(two.formula) == "S -> Q1"
    # each is followed by NEC on its code
    for n in (p.find_label("1"), p.find_label("2")):
        nxt = p.steps[n]
        assert nxt.rule == NEC and nxt.subproofs[0].conclusion == p.steps[n - 1].formula
    assert pr(p.conclusion) == "~S"


def test_one_day_refutation_is_short():
    p = derive_refutation(build_fitch(1))
    assert [s.rule for s in p.steps][:2] == ["TAUT", "NEC"]


def test_proof_relation_accepts_its_own_proof():
    fc = build_fitch(2)
    p = derive_refutation(fc)
    assert check_proof_code(proof_code(p), encode(Not(fc.sentence)))
    assert not check_proof_code(proof_code(p), encode(fc.sentence))
    assert not check_proof_code(12345, encode(Not(fc.sentence)))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_disabling_any_used_rule_rejects(m):
    p = derive_refutation(build_fitch(m))
    for rule in p.rules_used():
        assert not check(p, FITCH.without(rule)).accepted


def test_nec_disabled_fails_at_first_nec():
    p = derive_refutation(build_fitch(2))
    report = check(p, FITCH.without(NEC))
    first = next(i for i, s in enumerate(p.steps, 1) if s.rule == NEC)
    assert report.step == str(first) and report.rule == NEC


def _replace(p, n, step):
    steps = list(p.steps)
    steps[n - 1] = step
    return Proof(tuple(steps))


def test_wrong_eval_numeral_is_an_evaluation_mismatch():
    p = derive_refutation(build_fitch(2))
    n = next(i for i, s in enumerate(p.steps, 1) if s.rule == "EVAL")
    f = p.steps[n - 1].formula
    bad = Iff(f.f1, CodePred("P", Numeral(f.f2.t.value + 1)))
    report = check(_replace(p, n, Step(bad, "EVAL")), FITCH)
    assert not report.accepted and "evaluation mismatch" in report.reason


def test_nec_needs_matching_code():
    b = ProofBuilder()
    b.add(parse("Q1 -> Q1"), "TAUT")
    b.add(CodePred("P", Numeral(encode(parse("Q2 -> Q2")))), NEC, subproofs=[b.snapshot()])
    assert "does not have code" in check(b.build(), FITCH).reason


def test_nec_rejects_hypotheses():
    b = ProofBuilder()
    b.add(DayAtom(1), "HYP")
    p = Proof((Step(CodePred("P", Numeral(encode(DayAtom(1)))), NEC, (), (b.build(),)),))
    assert not check(p, FITCH.restricted(FITCH.rules | {"HYP"})).accepted


def test_premises_must_point_backwards():
    p = Proof((Step(DayAtom(1), "MP", (1, 2)),))
    assert "earlier step" in check(p, FITCH).reason


def test_knowledge_operators_are_outside_fitch():
    p = Proof((Step(parse("Ka 1 -> Ka 1"), "TAUT"),))
    assert not check(p, FITCH).accepted


def test_report_pinpoints_step_and_rule():
    p = Proof((Step(parse("Q1 -> Q2"), "TAUT"),))
    report = check(p, FITCH)
    assert str(report) == "rejected at step 1 [TAUT]: not a propositional tautology"


# Knower


def test_knower_sentence_refers_to_its_negation():
    kc = build_knower()
    assert eval_term(kc.sentence.t) == encode(Not(kc.sentence))
    assert decode(diag(kc.h, kc.h)) == kc.sentence


def test_knower_code_digit_length_is_pinned():
    assert len(str(build_knower().h)) == 12


def test_knower_contradiction():
    p = derive_knower_contradiction()
    assert check(p, KNOWER).accepted
    assert p.conclusion == Falsum()
    assert {"SCHEMA_A", "AXIOM_B", "RULE_C"} <= p.rules_used()


@pytest.mark.parametrize("rule", ["SCHEMA_A", "AXIOM_B", "RULE_C", "EVAL", "TAUT", "MP"])
def test_knower_needs_each_rule(rule):
    assert not check(derive_knower_contradiction(), KNOWER.without(rule)).accepted


def test_rule_c_refuses_nec_inside():
    p = derive_knower_contradiction()
    n = next(i for i, s in enumerate(p.steps, 1) if s.rule == RULE_C)
    step = p.steps[n - 1]
    sub = step.subproofs[0]
    inner = Proof(sub.steps + (Step(CodePred("P", Numeral(1)), NEC, (), (sub,)),))
    report = check(_replace(p, n, Step(step.formula, RULE_C, step.premises, (inner,))), KNOWER)
    assert not report.accepted and "outside" in report.reason


def test_rule_c_needs_known_factivity_instance():
    p = derive_knower_contradiction()
    n = next(i for i, s in enumerate(p.steps, 1) if s.rule == RULE_C)
    step = p.steps[n - 1]
    report = check(_replace(p, n, Step(step.formula, RULE_C, (), step.subproofs)), KNOWER)
    assert not report.accepted and "known" in report.reason


def test_tautology_atom_counts_stay_small_for_three_days():
    p = derive_refutation(build_fitch(3))
    assert max(atom_count(s.formula) for s in p.walk() if s.rule == "TAUT") <= 8
