import random
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from surprise_exam.games import (
    C,
    D,
    DepthStrategy,
    GameError,
    PayoffMatrix,
    StrategyProfile,
    all_histories,
    enumerate_pure_nash,
    is_all_defect,
    payoff_of,
    pure_strategies,
    random_payoffs,
    solve_spe,
    solve_spe_explicit,
    strategy_text,
)

payoff_matrices = st.lists(
    st.fractions(min_value=-50, max_value=50, max_denominator=12), min_size=4, max_size=4, unique=True
).map(lambda v: PayoffMatrix(*sorted(v, reverse=True)))


def constant(n, action):
    return DepthStrategy((action,) * n)


def test_default_payoffs():
    pm = PayoffMatrix()
    assert (pm.T, pm.R, pm.P, pm.S) == (2, 1, 0, -2)


@pytest.mark.parametrize("values", [(1, 2, 0, -2), (2, 1, 1, -2), (2, 1, 0, 0)])
def test_not_a_prisoners_dilemma(values):
    with pytest.raises(GameError, match="not a prisoner's dilemma"):
        PayoffMatrix(*values)


def test_parse_payoffs():
    assert PayoffMatrix.parse("5, 3, 1/2, -1") == PayoffMatrix(5, 3, Fraction(1, 2), -1)
    with pytest.raises(GameError):
        PayoffMatrix.parse("1,2,3")
    with pytest.raises(GameError):
        PayoffMatrix.parse("a,b,c,d")


@pytest.mark.parametrize(
    "n, a1, a2, expected",
    [(1, D, D, (0, 0)), (2, C, C, (2, 2)), (1, D, C, (2, -2)), (1, C, D, (-2, 2))],
)
def test_payoff_of(n, a1, a2, expected):
    profile = StrategyProfile(n, (constant(n, a1), constant(n, a2)))
    assert payoff_of(profile, PayoffMatrix()) == expected


def test_histories_are_ordered_and_complete():
    hs = list(all_histories(3))
    assert len(hs) == 1 + 4 + 16
    assert hs[1:5] == [((C, C),), ((C, D),), ((D, C),), ((D, D),)]


def test_profile_validation_detects_missing_history():
    partial = {(): D}
    with pytest.raises(GameError, match="no action"):
        StrategyProfile(2, (partial, constant(2, D))).validate()


@pytest.mark.parametrize("n", [1, 10])
def test_spe_always_defects(n):
    result = solve_spe(n)
    result.profile.validate()
    for strategy in result.profile.strategies:
        assert set(strategy.by_round) == {D}
    assert result.value == (0, 0)
    assert is_all_defect(result.path)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_explicit_induction_matches_round_induction(n):
    pm = PayoffMatrix(7, 3, -1, -9)
    fast, slow = solve_spe(n, pm), solve_spe_explicit(n, pm)
    assert fast.value == slow.value == (n * pm.P, n * pm.P)
    for f, s in zip(fast.profile.strategies, slow.profile.strategies):
        assert dict(f.items()) == s


@given(payoff_matrices, st.integers(1, 10))
def test_spe_defects_for_any_dilemma(pm, n):
    result = solve_spe(n, pm)
    assert set(result.profile.strategies[0].by_round) == {D}
    assert set(result.profile.strategies[1].by_round) == {D}
    assert result.value == (n * pm.P, n * pm.P)


def test_one_round_has_single_equilibrium():
    eqs = enumerate_pure_nash(1)
    assert len(eqs) == 1
    assert eqs[0].path == ((D, D),)


def test_two_round_equilibria_all_defect_on_path():
    eqs = enumerate_pure_nash(2)
    assert eqs
    assert all(is_all_defect(e.path) for e in eqs)
    texts = {tuple(strategy_text(s, 2) for s in e.profile.strategies) for e in eqs}
    assert ("D/DDDD", "D/DDDD") in texts
    # off-path actions vary
    assert len({t[0] for t in texts}) > 1


def test_strategy_space_sizes():
    assert len(pure_strategies(1)) == 2
    assert len(pure_strategies(2)) == 32


def test_enumeration_limited_to_two_rounds():
    with pytest.raises(GameError):
        enumerate_pure_nash(3)


@pytest.mark.parametrize("n", [1, 2])
def test_spe_value_matches_best_equilibrium(n):
    pm = PayoffMatrix()
    eqs = enumerate_pure_nash(n, pm)
    spe = solve_spe(n, pm)
    assert max(e.value for e in eqs) == spe.value
    assert spe.path in {e.path for e in eqs}


@given(payoff_matrices, st.fractions(min_value=Fraction(1, 10), max_value=10), st.fractions(-5, 5))
def test_affine_rescaling_changes_nothing(pm, scale, shift):
    scaled = pm.affine(scale, shift)
    assert solve_spe(3, pm).path == solve_spe(3, scaled).path
    paths = [e.path for e in enumerate_pure_nash(1, pm)]
    assert paths == [e.path for e in enumerate_pure_nash(1, scaled)]


def test_affine_rescaling_two_rounds():
    rng = random.Random(3)
    pm = random_payoffs(rng)
    a = enumerate_pure_nash(2, pm)
    b = enumerate_pure_nash(2, pm.affine(3, -7))
    assert [e.to_json()["profile"] for e in a] == [e.to_json()["profile"] for e in b]


def test_affine_rejects_non_positive_scale():
    with pytest.raises(GameError):
        PayoffMatrix().affine(0)


def test_equilibrium_json():
    doc = enumerate_pure_nash(1)[0].to_json()
    assert doc == {"profile": ["D", "D"], "path": ["DD"], "value": ["0", "0"]}
