import random

import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import formulas
from surprise_exam.formula import (
    X,
    And,
    CodePred,
    D,
    DayAtom,
    Falsum,
    Implies,
    Know,
    Neg,
    Not,
    Numeral,
    substitute,
)
from surprise_exam.formula.generate import random_formula
from surprise_exam.godel import (
    CodeError,
    FragmentError,
    abbreviate,
    conj_code,
    decode,
    decode_proof,
    diag,
    digit_length,
    encode,
    eval_term,
    imp_code,
    is_formula_code,
    neg_code,
    proof_code,
)

codable = formulas(modal=False)


def test_small_codes_are_pinned():
    # 'Q' '1' ';' read base 256
    assert encode(DayAtom(1)) == 0x51313B
    assert encode(Not(DayAtom(1))) == 0x7E51313B
    assert decode(0x46) == Falsum()


@given(codable)
def test_encode_decode_round_trip(f):
    assert decode(encode(f)) == f


@given(codable, codable)
def test_encoding_is_injective(f, g):
    assert (encode(f) == encode(g)) == (f == g)


@given(codable, codable)
def test_code_connectives_commute_with_encode(f, g):
    assert neg_code(encode(f)) == encode(Not(f))
    assert conj_code(encode(f), encode(g)) == encode(And(f, g))
    assert imp_code(encode(f), encode(g)) == encode(Implies(f, g))


@given(codable, st.integers(0, 10**50))
def test_diag_agrees_with_tree_substitution(f, n):
    # byte rewriting and tree substitution are independent routes
    assert diag(encode(f), n) == encode(substitute(f, n))


def test_diag_of_open_knower_formula():
    f = CodePred("K", Neg(D(X, X)))
    h = encode(f)
    s = decode(diag(h, h))
    assert s == CodePred("K", Neg(D(Numeral(h), Numeral(h))))
    assert eval_term(s.t) == encode(Not(s))


@pytest.mark.parametrize("c", [0, -3, 1, 0x41, 0x51303B, 0x51313B00, 0x2623])
def test_decode_rejects_non_codes(c):
    assert not is_formula_code(c)
    with pytest.raises(CodeError):
        decode(c)


@given(st.integers(1, 2**64))
def test_decode_is_total(c):
    # every natural is either a code of its own decoding or rejected
    try:
        f = decode(c)
    except CodeError:
        return
    assert encode(f) == c


def test_code_connectives_reject_non_codes():
    with pytest.raises(CodeError):
        neg_code(12345)
    with pytest.raises(CodeError):
        conj_code(encode(DayAtom(1)), 7)


def test_knowledge_operators_have_no_code():
    with pytest.raises(FragmentError):
        encode(Know("a", DayAtom(1)))
    with pytest.raises(FragmentError):
        encode(CodePred("Z", Numeral(1)))


def test_eval_term_rejects_open_terms():
    with pytest.raises(CodeError, match="open term"):
        eval_term(Neg(X))


def test_eval_term_evaluates_operators():
    q = encode(DayAtom(2))
    assert eval_term(Neg(Numeral(q))) == encode(Not(DayAtom(2)))


def test_proof_code_round_trip_drops_labels():
    from surprise_exam.selfref import build_fitch, derive_refutation

    p = derive_refutation(build_fitch(2))
    back = decode_proof(proof_code(p))
    assert back == p
    assert all(s.label is None for s in back.walk())


def test_abbreviation():
    c = 10**80 + 12345
    text = abbreviate(c)
    assert text.startswith("1000000000000000...")
    assert "(81 digits, sha256:" in text
    assert abbreviate(42) == "42"
    assert digit_length(c) == 81


def test_homomorphism_seeded_pairs():
    rng = random.Random(11)
    for _ in range(200):
        f = random_formula(rng, modal=False)
        g = random_formula(rng, modal=False)
        assert imp_code(encode(f), encode(g)) == encode(Implies(f, g))
