"""Immutable syntax trees for terms and formulas of the object language.

Terms denote natural numbers (Gödel codes). Besides numerals and the single
free variable ``x`` they include the code-level connectives ``Neg``, ``Conj``,
``Imp`` and the diagonal operator ``D``. Formulas cover day atoms, predicates
applied to terms (``P[t]``, ``K[t]``), per-agent knowledge, and the usual
propositional connectives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Union


class _TermNode:
    @cached_property
    def closed(self) -> bool:
        """True iff the term contains no free variable."""
        return _is_closed(self)


@dataclass(frozen=True)
class Numeral(_TermNode):
    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, int) or self.value < 0:
            raise ValueError(f"numeral must be a non-negative integer, got {self.value!r}")


@dataclass(frozen=True)
class Var(_TermNode):
    """The free variable ``x``; there is only one."""


@dataclass(frozen=True)
class Neg(_TermNode):
    t: Term


@dataclass(frozen=True)
class Conj(_TermNode):
    t1: Term
    t2: Term


@dataclass(frozen=True)
class Imp(_TermNode):
    t1: Term
    t2: Term


@dataclass(frozen=True)
class D(_TermNode):
    """Diagonalization: code of the formula coded by ``t1`` with its free
    variable replaced by the numeral ``t2``."""

    t1: Term
    t2: Term


Term = Union[Numeral, Var, Neg, Conj, Imp, D]


@dataclass(frozen=True)
class DayAtom:
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"day index must be >= 1, got {self.k!r}")


@dataclass(frozen=True)
class CodePred:
    label: str
    t: Term


@dataclass(frozen=True)
class Know:
    agent: str
    body: Formula


@dataclass(frozen=True)
class Not:
    f: Formula


@dataclass(frozen=True)
class And:
    f1: Formula
    f2: Formula


@dataclass(frozen=True)
class Or:
    f1: Formula
    f2: Formula


@dataclass(frozen=True)
class Xor:
    f1: Formula
    f2: Formula


@dataclass(frozen=True)
class Implies:
    f1: Formula
    f2: Formula


@dataclass(frozen=True)
class Iff:
    f1: Formula
    f2: Formula


@dataclass(frozen=True)
class Falsum:
    pass


Formula = Union[DayAtom, CodePred, Know, Not, And, Or, Xor, Implies, Iff, Falsum]

TERM_TYPES = (Numeral, Var, Neg, Conj, Imp, D)
FORMULA_TYPES = (DayAtom, CodePred, Know, Not, And, Or, Xor, Implies, Iff, Falsum)
BINARY_TERMS = (Conj, Imp, D)
BINARY_FORMULAS = (And, Or, Xor, Implies, Iff)

FALSUM = Falsum()
X = Var()


def _is_closed(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, Numeral):
        return True
    if isinstance(t, Neg):
        return t.t.closed
    return t.t1.closed and t.t2.closed


def conj_chain(items: list[Formula]) -> Formula:
    """Left-nested conjunction ``((a & b) & c) ...``; a single item is returned as is."""
    out = items[0]
    for f in items[1:]:
        out = And(out, f)
    return out


def disj_chain(items: list[Formula], connective: type = Or) -> Formula:
    out = items[0]
    for f in items[1:]:
        out = connective(out, f)
    return out


def implication_chain(antecedents: list[Formula], consequent: Formula) -> Formula:
    """``a1 -> (a2 -> (... -> c))``."""
    out = consequent
    for a in reversed(antecedents):
        out = Implies(a, out)
    return out


def map_terms(f: Formula, fn: Callable[[Term], Term]) -> Formula:
    """Rebuild ``f`` with ``fn`` applied to the argument term of every predicate atom."""
    if isinstance(f, CodePred):
        return CodePred(f.label, fn(f.t))
    if isinstance(f, (DayAtom, Falsum)):
        return f
    if isinstance(f, Know):
        return Know(f.agent, map_terms(f.body, fn))
    if isinstance(f, Not):
        return Not(map_terms(f.f, fn))
    return type(f)(map_terms(f.f1, fn), map_terms(f.f2, fn))


def substitute_term(t: Term, n: int) -> Term:
    if isinstance(t, Var):
        return Numeral(n)
    if t.closed:
        return t
    if isinstance(t, Neg):
        return Neg(substitute_term(t.t, n))
    return type(t)(substitute_term(t.t1, n), substitute_term(t.t2, n))


def substitute(f: Formula, n: int) -> Formula:
    """Replace every occurrence of the free variable by the numeral ``n``."""
    return map_terms(f, lambda t: substitute_term(t, n))


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Neg):
        yield from subterms(t.t)
    elif isinstance(t, BINARY_TERMS):
        yield from subterms(t.t1)
        yield from subterms(t.t2)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.f)
    elif isinstance(f, Know):
        yield from subformulas(f.body)
    elif isinstance(f, BINARY_FORMULAS):
        yield from subformulas(f.f1)
        yield from subformulas(f.f2)


def terms_of(f: Formula) -> Iterator[Term]:
    for g in subformulas(f):
        if isinstance(g, CodePred):
            yield g.t


def is_closed(f: Formula) -> bool:
    return all(t.closed for t in terms_of(f))


def size(obj: Formula | Term) -> int:
    """Node count, terms included."""
    if isinstance(obj, TERM_TYPES):
        return sum(1 for _ in subterms(obj))
    return sum(1 + (size(g.t) if isinstance(g, CodePred) else 0) for g in subformulas(obj))


def rename_agents(f: Formula, mapping: dict[str, str]) -> Formula:
    if isinstance(f, Know):
        return Know(mapping.get(f.agent, f.agent), rename_agents(f.body, mapping))
    if isinstance(f, (DayAtom, Falsum, CodePred)):
        return f
    if isinstance(f, Not):
        return Not(rename_agents(f.f, mapping))
    return type(f)(rename_agents(f.f1, mapping), rename_agents(f.f2, mapping))
