"""Seeded random formulas for round-trip and coding property checks."""

from __future__ import annotations

import random

from .tree import (
    D,
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
)

AGENTS = ("a", "b", "1", "2", "Art")


def random_term(rng: random.Random, depth: int, allow_var: bool = True) -> Term:
    if depth <= 0 or rng.random() < 0.3:
        if allow_var and rng.random() < 0.3:
            return Var()
        return Numeral(rng.choice([0, 1, 7, rng.randrange(10**6), rng.randrange(10**40)]))
    kind = rng.randrange(4)
    if kind == 0:
        return Neg(random_term(rng, depth - 1, allow_var))
    cls = (Conj, Imp, D)[kind - 1]
    return cls(random_term(rng, depth - 1, allow_var), random_term(rng, depth - 1, allow_var))


def random_formula(
    rng: random.Random,
    depth: int = 6,
    modal: bool = True,
    max_day: int = 9,
    labels: tuple[str, ...] = ("P", "K"),
) -> Formula:
    """A formula of nesting depth at most ``depth``.

    ``modal=False`` restricts to the codable fragment (no ``Know`` nodes).
    """
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.5:
            return DayAtom(rng.randint(1, max_day))
        if r < 0.9:
            return CodePred(rng.choice(labels), random_term(rng, 3))
        return Falsum()
    choices = [Not, And, Or, Xor, Implies, Iff]
    if modal:
        choices.append(Know)
    cls = rng.choice(choices)
    if cls is Not:
        return Not(random_formula(rng, depth - 1, modal, max_day, labels))
    if cls is Know:
        return Know(rng.choice(AGENTS), random_formula(rng, depth - 1, modal, max_day, labels))
    return cls(
        random_formula(rng, depth - 1, modal, max_day, labels),
        random_formula(rng, depth - 1, modal, max_day, labels),
    )
