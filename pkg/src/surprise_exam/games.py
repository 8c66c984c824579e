"""Finitely iterated prisoner's dilemma: backward induction and pure Nash enumeration.

Actions are ``"C"`` and ``"D"``; a joint action is a pair (player 1, player 2)
and a history is a tuple of joint actions. Histories are ordered by length and
then lexicographically with C before D, so every table prints the same way.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

C, D = "C", "D"
ACTIONS = (C, D)
JOINT = tuple(itertools.product(ACTIONS, repeat=2))  # CC, CD, DC, DD

Joint = tuple[str, str]
History = tuple[Joint, ...]
Number = Union[int, Fraction, str]


class GameError(ValueError):
    pass


@dataclass(frozen=True)
class PayoffMatrix:
    T: Fraction = Fraction(2)
    R: Fraction = Fraction(1)
    P: Fraction = Fraction(0)
    S: Fraction = Fraction(-2)

    def __post_init__(self) -> None:
        for name in "TRPS":
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.T > self.R > self.P > self.S:
            raise GameError("not a prisoner's dilemma: need T > R > P > S")

    @classmethod
    def parse(cls, text: str) -> PayoffMatrix:
        """``"T,R,P,S"`` with integer, decimal or fractional entries."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise GameError("payoffs must be four comma-separated numbers T,R,P,S")
        try:
            values = [Fraction(p) for p in parts]
        except (ValueError, ZeroDivisionError) as e:
            raise GameError(f"bad payoff value: {e}") from None
        return cls(*values)

    def stage(self, a1: str, a2: str) -> tuple[Fraction, Fraction]:
        table = {
            (C, C): (self.R, self.R),
            (C, D): (self.S, self.T),
            (D, C): (self.T, self.S),
            (D, D): (self.P, self.P),
        }
        return table[a1, a2]

    def affine(self, scale: Number, shift: Number = 0) -> PayoffMatrix:
        scale, shift = Fraction(scale), Fraction(shift)
        if scale <= 0:
            raise GameError("scale must be positive")
        return PayoffMatrix(*(scale * v + shift for v in (self.T, self.R, self.P, self.S)))

    def to_json(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in "TRPS"}


def random_payoffs(rng: random.Random, spread: int = 20) -> PayoffMatrix:
    """Four distinct rationals in descending order."""
    values: set[Fraction] = set()
    while len(values) < 4:
        values.add(Fraction(rng.randint(-spread * 6, spread * 6), rng.randint(1, 6)))
    return PayoffMatrix(*sorted(values, reverse=True))


def histories(length: int) -> Iterator[History]:
    return itertools.product(JOINT, repeat=length)


def all_histories(n: int) -> Iterator[History]:
    """Every history a strategy for ``n`` rounds must answer, i.e. of length < n."""
    for k in range(n):
        yield from histories(k)


def history_text(h: History) -> str:
    return " ".join(a + b for a, b in h) or "-"


class DepthStrategy(Mapping):
    """A strategy whose action depends only on how many rounds have been played."""

    def __init__(self, by_round: tuple[str, ...]):
        self.by_round = by_round

    def __getitem__(self, h: History) -> str:
        if len(h) >= len(self.by_round) or any(j not in JOINT for j in h):
            raise KeyError(h)
        return self.by_round[len(h)]

    def __iter__(self) -> Iterator[History]:
        return all_histories(len(self.by_round))

    def __len__(self) -> int:
        return sum(4**k for k in range(len(self.by_round)))


@dataclass(frozen=True)
class StrategyProfile:
    n: int
    strategies: tuple[Mapping, Mapping]

    def validate(self) -> None:
        for player, strategy in enumerate(self.strategies, 1):
            for h in all_histories(self.n):
                if strategy.get(h) not in ACTIONS:
                    raise GameError(f"player {player} has no action at {history_text(h)}")

    def play_path(self) -> History:
        h: History = ()
        for _ in range(self.n):
            h += ((self.strategies[0][h], self.strategies[1][h]),)
        return h


def payoff_of(profile: StrategyProfile, pm: PayoffMatrix) -> tuple[Fraction, Fraction]:
    u1 = u2 = Fraction(0)
    for a1, a2 in profile.play_path():
        v1, v2 = pm.stage(a1, a2)
        u1 += v1
        u2 += v2
    return u1, u2


# subgame perfection


@dataclass(frozen=True)
class SPEResult:
    profile: StrategyProfile
    value: tuple[Fraction, Fraction]
    path: History


def _stage_equilibrium(pm: PayoffMatrix, cont: tuple[Fraction, Fraction]) -> Joint:
    """The pure equilibrium of one round followed by a continuation worth ``cont``."""

    def u(a1: str, a2: str) -> tuple[Fraction, Fraction]:
        v = pm.stage(a1, a2)
        return v[0] + cont[0], v[1] + cont[1]

    found = [
        (a1, a2)
        for a1, a2 in JOINT
        if all(u(b, a2)[0] <= u(a1, a2)[0] for b in ACTIONS)
        and all(u(a1, b)[1] <= u(a1, a2)[1] for b in ACTIONS)
    ]
    if len(found) != 1:
        raise GameError("stage game has no unique pure equilibrium")
    return found[0]


def solve_spe(n: int, pm: PayoffMatrix | None = None) -> SPEResult:
    """Backward induction over rounds.

    Every subgame that starts after k rounds is the same (n - k)-round game,
    so one equilibrium per round covers all 4^k histories of that length.
    :func:`solve_spe_explicit` redoes the induction history by history.
    """
    if n < 1:
        raise GameError("need at least one round")
    pm = pm or PayoffMatrix()
    plan: list[Joint] = []
    value = (Fraction(0), Fraction(0))
    for _ in range(n):
        a1, a2 = _stage_equilibrium(pm, value)
        v = pm.stage(a1, a2)
        value = (v[0] + value[0], v[1] + value[1])
        plan.append((a1, a2))
    plan.reverse()
    profile = StrategyProfile(
        n, (DepthStrategy(tuple(p[0] for p in plan)), DepthStrategy(tuple(p[1] for p in plan)))
    )
    return SPEResult(profile, value, profile.play_path())


def solve_spe_explicit(n: int, pm: PayoffMatrix | None = None) -> SPEResult:
    """Backward induction on the full game tree with one table entry per history."""
    if n < 1:
        raise GameError("need at least one round")
    pm = pm or PayoffMatrix()
    zero = (Fraction(0), Fraction(0))
    values: dict[History, tuple[Fraction, Fraction]] = {h: zero for h in histories(n)}
    tables: tuple[dict[History, str], dict[History, str]] = ({}, {})
    for k in range(n - 1, -1, -1):
        for h in histories(k):
            cells = {}
            for j in JOINT:
                stage, cont = pm.stage(*j), values[h + (j,)]
                cells[j] = (stage[0] + cont[0], stage[1] + cont[1])
            eq = [
                (a1, a2)
                for a1, a2 in JOINT
                if all(cells[b, a2][0] <= cells[a1, a2][0] for b in ACTIONS)
                and all(cells[a1, b][1] <= cells[a1, a2][1] for b in ACTIONS)
            ]
            if len(eq) != 1:
                raise GameError(f"no unique pure equilibrium after {history_text(h)}")
            tables[0][h], tables[1][h] = eq[0]
            values[h] = cells[eq[0]]
        for h in histories(k + 1):
            del values[h]
    profile = StrategyProfile(n, tables)
    return SPEResult(profile, values[()], profile.play_path())


# exhaustive pure Nash enumeration

MAX_ENUMERATION_ROUNDS = 2


def pure_strategies(n: int) -> list[dict[History, str]]:
    """All pure strategies, ordered lexicographically by their action string."""
    hs = list(all_histories(n))
    return [dict(zip(hs, choice)) for choice in itertools.product(ACTIONS, repeat=len(hs))]


def strategy_text(strategy: Mapping, n: int) -> str:
    """Actions grouped by round, e.g. ``D/DCDD`` answers the root and then CC, CD, DC, DD."""
    return "/".join("".join(strategy[h] for h in histories(k)) for k in range(n))


@dataclass(frozen=True)
class Equilibrium:
    profile: StrategyProfile
    path: History
    value: tuple[Fraction, Fraction]

    def to_json(self) -> dict[str, Any]:
        n = self.profile.n
        return {
            "profile": [strategy_text(s, n) for s in self.profile.strategies],
            "path": [a + b for a, b in self.path],
            "value": [str(v) for v in self.value],
        }


def normal_form(n: int, pm: PayoffMatrix):
    """Strategies and the payoff pair for each (row, column) strategy pair."""
    strategies = pure_strategies(n)
    table = [
        [payoff_of(StrategyProfile(n, (s1, s2)), pm) for s2 in strategies] for s1 in strategies
    ]
    return strategies, table


def enumerate_pure_nash(n: int, pm: PayoffMatrix | None = None) -> list[Equilibrium]:
    """Every pure Nash equilibrium, found by checking all unilateral deviations."""
    if not 1 <= n <= MAX_ENUMERATION_ROUNDS:
        raise GameError(f"exhaustive enumeration supports 1 to {MAX_ENUMERATION_ROUNDS} rounds")
    pm = pm or PayoffMatrix()
    strategies, table = normal_form(n, pm)
    size = len(strategies)
    col_best = [max(table[i][j][0] for i in range(size)) for j in range(size)]
    row_best = [max(table[i][j][1] for j in range(size)) for i in range(size)]
    found = []
    for i in range(size):
        for j in range(size):
            u = table[i][j]
            if u[0] == col_best[j] and u[1] == row_best[i]:
                profile = StrategyProfile(n, (strategies[i], strategies[j]))
                found.append(Equilibrium(profile, profile.play_path(), u))
    return found


def is_all_defect(path: History) -> bool:
    return all(j == (D, D) for j in path)
