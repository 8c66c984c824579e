"""Concrete syntax: tokenizer, parser and canonical printer.

Precedence, tightest first: ``~`` and ``K<agent>`` prefixes, ``&``, ``|`` and
``xor`` (left associative), ``->`` (right associative), ``<->``.
Term operators: ``Neg`` prefix, ``Conj`` (left associative), ``Imp`` (right
associative); ``D(t,t)`` and the call forms ``Conj(t,t)``, ``Imp(t,t)``,
``Neg(t)`` are also accepted. See ``docs/grammar.md`` for the EBNF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

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

DEFAULT_LABELS = frozenset({"P", "K"})
KEYWORDS = frozenset({"false", "xor", "x", "Neg", "Conj", "Imp", "D"})

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[~&|()\[\],])|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)
_DAY = re.compile(r"Q(\d+)")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


@dataclass(frozen=True)
class Token:
    kind: str  # "op", "num", "ident" or "eof"
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            tokens.append(Token("eof", "", pos))
            return tokens
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()


class Parser:
    """Recursive-descent parser over a token list.

    ``numerals`` binds symbolic names (``h``, ``q1``) to numeral values in
    term position; ``formulas`` binds abbreviation names (``S``) in formula
    position.
    """

    def __init__(
        self,
        text: str,
        numerals: Mapping[str, int] | None = None,
        formulas: Mapping[str, Formula] | None = None,
        labels: frozenset[str] = DEFAULT_LABELS,
    ):
        self.tokens = tokenize(text)
        self.i = 0
        self.numerals = numerals or {}
        self.formulas = formulas or {}
        self.labels = labels

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        if tok.kind == "eof":
            return ParseError(f"{message}, found end of input", tok.offset)
        return ParseError(f"{message}, found {tok.text!r}", tok.offset)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "eof":
            raise self.error(f"expected {text!r}")
        return self.advance()

    # formulas

    def formula(self) -> Formula:
        left = self.implication()
        if self.tok.text == "<->":
            self.advance()
            return Iff(left, self.formula())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.tok.text == "->":
            self.advance()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.tok.text in ("|", "xor") and self.tok.kind != "eof":
            op = self.advance().text
            right = self.conjunction()
            left = Or(left, right) if op == "|" else Xor(left, right)
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.tok.text == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if tok.text == "~":
            self.advance()
            return Not(self.unary())
        if (
            tok.kind == "ident"
            and tok.text.startswith("K")
            and len(tok.text) > 1
            and self.peek().text != "["
        ):
            self.advance()
            return Know(tok.text[1:], self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.tok
        if tok.text == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "num":
            self.advance()
            return self._day(int(tok.text), tok)
        if tok.kind != "ident":
            raise self.error("expected a formula")
        if self.peek().text == "[" and tok.text in self.labels:
            self.advance()
            self.advance()
            t = self.term()
            self.expect("]")
            return CodePred(tok.text, t)
        if tok.text == "false":
            self.advance()
            return Falsum()
        m = _DAY.fullmatch(tok.text)
        if m:
            self.advance()
            return self._day(int(m.group(1)), tok)
        if tok.text in self.formulas:
            self.advance()
            return self.formulas[tok.text]
        if self.peek().text == "[":
            raise ParseError(f"unknown predicate label {tok.text!r}", tok.offset)
        raise ParseError(f"unknown identifier {tok.text!r}", tok.offset)

    @staticmethod
    def _day(k: int, tok: Token) -> DayAtom:
        if k == 0:
            raise ParseError("day index 0", tok.offset)
        return DayAtom(k)

    # terms

    def term(self) -> Term:
        left = self.term_conj()
        if self.tok.text == "Imp" and self.tok.kind == "ident":
            self.advance()
            return Imp(left, self.term())
        return left

    def term_conj(self) -> Term:
        left = self.term_unary()
        while self.tok.text == "Conj" and self.tok.kind == "ident":
            self.advance()
            left = Conj(left, self.term_unary())
        return left

    def term_unary(self) -> Term:
        if self.tok.text == "Neg" and self.tok.kind == "ident":
            self.advance()
            return Neg(self.term_unary())
        return self.term_primary()

    def term_primary(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Numeral(int(tok.text))
        if tok.text == "(":
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if tok.kind != "ident":
            raise self.error("expected a term")
        if tok.text in ("D", "Conj", "Imp"):
            self.advance()
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return {"D": D, "Conj": Conj, "Imp": Imp}[tok.text](a, b)
        if tok.text == "x":
            self.advance()
            return Var()
        if tok.text in self.numerals:
            self.advance()
            return Numeral(self.numerals[tok.text])
        raise ParseError(f"unbound numeral name {tok.text!r}", tok.offset)


def parse_prefix(text: str, **env) -> tuple[Formula, int]:
    """Parse the longest formula prefix; return it with the offset where it stops."""
    p = Parser(text, **env)
    f = p.formula()
    return f, p.tok.offset


def parse(
    text: str,
    numerals: Mapping[str, int] | None = None,
    formulas: Mapping[str, Formula] | None = None,
    labels: frozenset[str] = DEFAULT_LABELS,
) -> Formula:
    p = Parser(text, numerals, formulas, labels)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error("expected end of input")
    return f


def parse_term(text: str, numerals: Mapping[str, int] | None = None) -> Term:
    p = Parser(text, numerals)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("expected end of input")
    return t


_SYMBOL = {And: "&", Or: "|", Xor: "xor", Implies: "->", Iff: "<->"}
_LEFT_CHAINED = (And, Or, Xor)


def _contains_know(f: Formula) -> bool:
    from .tree import subformulas

    return any(isinstance(g, Know) for g in subformulas(f))


class Printer:
    def __init__(
        self,
        bare_days: bool | None = None,
        numeral_names: Mapping[int, str] | None = None,
        abbrevs: Mapping[Formula, str] | None = None,
    ):
        self.bare_days = bare_days
        self.numeral_names = numeral_names or {}
        self.abbrevs = abbrevs or {}

    def __call__(self, f: Formula) -> str:
        if self.bare_days is None:
            return Printer(_contains_know(f), self.numeral_names, self.abbrevs)(f)
        return self.formula(f)

    def formula(self, f: Formula) -> str:
        if self.abbrevs and f in self.abbrevs:
            return self.abbrevs[f]
        if isinstance(f, DayAtom):
            return str(f.k) if self.bare_days else f"Q{f.k}"
        if isinstance(f, Falsum):
            return "false"
        if isinstance(f, CodePred):
            return f"{f.label}[{self.term(f.t)}]"
        if isinstance(f, Not):
            return "~" + self._operand(f.f)
        if isinstance(f, Know):
            return f"K{f.agent} " + self._operand(f.body)
        left = self.formula(f.f1)
        if not (isinstance(f, _LEFT_CHAINED) and type(f.f1) is type(f)):
            left = self._operand(f.f1, left)
        return f"{left} {_SYMBOL[type(f)]} {self._operand(f.f2)}"

    def _operand(self, f: Formula, text: str | None = None) -> str:
        if text is None:
            text = self.formula(f)
        if type(f) in _SYMBOL and not (self.abbrevs and f in self.abbrevs):
            return f"({text})"
        return text

    def term(self, t: Term) -> str:
        if isinstance(t, Numeral):
            return self.numeral_names.get(t.value, str(t.value))
        if isinstance(t, Var):
            return "x"
        if isinstance(t, D):
            return f"D({self.term(t.t1)},{self.term(t.t2)})"
        if isinstance(t, Neg):
            inner = self.term(t.t)
            return f"Neg({inner})" if isinstance(t.t, (Conj, Imp)) else f"Neg {inner}"
        left = self.term(t.t1)
        if isinstance(t.t1, Imp) or (isinstance(t.t1, Conj) and isinstance(t, Imp)):
            left = f"({left})"
        right = self.term(t.t2)
        if isinstance(t.t2, (Conj, Imp)):
            right = f"({right})"
        op = "Conj" if isinstance(t, Conj) else "Imp"
        return f"{left} {op} {right}"


def to_text(
    f: Formula,
    bare_days: bool | None = None,
    numeral_names: Mapping[int, str] | None = None,
    abbrevs: Mapping[Formula, str] | None = None,
) -> str:
    """Canonical text of ``f``. Day atoms print bare (``1``) when ``f`` contains
    a knowledge operator, unless ``bare_days`` says otherwise."""
    return Printer(bare_days, numeral_names, abbrevs)(f)


def term_to_text(t: Term, numeral_names: Mapping[int, str] | None = None) -> str:
    return Printer(False, numeral_names).term(t)
