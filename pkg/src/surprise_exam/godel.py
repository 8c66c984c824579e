"""Gödel numbering of formulas and proofs.

A formula is serialized in prefix form over a small byte alphabet and the
byte string is read as a big-endian base-256 natural. Numerals are embedded
as decimal digit strings, so a code grows linearly with the formula::

    Falsum 'F'     DayAtom 'Q' digits ';'    P[t] 'P' t    K[t] 'K' t
    ~ '~'   & '&'   | '|'   xor '^'   -> '>'   <-> '='    (prefix, binary)
    numeral '#' digits ';'   x 'x'   Neg 'n'   Conj 'c'   Imp 'i'   D 'd'

Proofs: ``'[' step+ ']'`` with ``step = '{' formula 'r' RULE ';' ('p' digits
';')* proof* '}'``. Every byte string starts with a printable byte, so the
reading as an integer is injective. ``decode`` is total: any natural either
parses completely under this grammar or is rejected with ``CodeError``.
"""

from __future__ import annotations

import hashlib
import sys

from .formula.proof import Proof, Step
from .formula.tree import (
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

# Codes of the larger constructions run to tens of thousands of digits.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

CODED_LABELS = frozenset({"P", "K"})

_BINARY_TAG = {And: b"&", Or: b"|", Xor: b"^", Implies: b">", Iff: b"="}
_TAG_BINARY = {v[0]: k for k, v in _BINARY_TAG.items()}
_TERM_TAG = {Conj: b"c", Imp: b"i", D: b"d"}
_TAG_TERM = {v[0]: k for k, v in _TERM_TAG.items()}
_DIGITS = frozenset(b"0123456789")
_RULE_CHARS = frozenset(b"ABCDEFGHIJKLMNOPQRSTUVWXYZ_")


class CodeError(ValueError):
    """Raised for naturals that are not codes of the expected kind."""


class FragmentError(ValueError):
    """Raised when a formula outside the codable fragment is encoded."""


# serialization


def _term_bytes(t: Term, out: bytearray) -> None:
    if isinstance(t, Numeral):
        out += b"#" + str(t.value).encode() + b";"
    elif isinstance(t, Var):
        out += b"x"
    elif isinstance(t, Neg):
        out += b"n"
        _term_bytes(t.t, out)
    else:
        out += _TERM_TAG[type(t)]
        _term_bytes(t.t1, out)
        _term_bytes(t.t2, out)


def _formula_bytes(f: Formula, out: bytearray) -> None:
    if isinstance(f, Falsum):
        out += b"F"
    elif isinstance(f, DayAtom):
        out += b"Q" + str(f.k).encode() + b";"
    elif isinstance(f, CodePred):
        if f.label not in CODED_LABELS:
            raise FragmentError(f"predicate label {f.label!r} has no code")
        out += f.label.encode()
        _term_bytes(f.t, out)
    elif isinstance(f, Not):
        out += b"~"
        _formula_bytes(f.f, out)
    elif isinstance(f, Know):
        raise FragmentError("knowledge operators are outside the codable fragment")
    else:
        out += _BINARY_TAG[type(f)]
        _formula_bytes(f.f1, out)
        _formula_bytes(f.f2, out)


def _from_bytes(b: bytes | bytearray) -> int:
    return int.from_bytes(b, "big")


def _to_bytes(c: int) -> bytes:
    if not isinstance(c, int) or c <= 0:
        raise CodeError(f"not a valid code: {c!r}")
    return c.to_bytes((c.bit_length() + 7) // 8, "big")


def encode(f: Formula) -> int:
    out = bytearray()
    _formula_bytes(f, out)
    return _from_bytes(out)


# parsing


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def fail(self, what: str) -> CodeError:
        return CodeError(f"not a valid code: {what} at byte {self.pos}")

    def byte(self) -> int:
        if self.pos >= len(self.data):
            raise self.fail("truncated")
        b = self.data[self.pos]
        self.pos += 1
        return b

    def peek(self) -> int | None:
        return self.data[self.pos] if self.pos < len(self.data) else None

    def digits(self) -> int:
        start = self.pos
        while self.peek() in _DIGITS:
            self.pos += 1
        raw = self.data[start : self.pos]
        if not raw or (len(raw) > 1 and raw[0] == 0x30):
            raise self.fail("bad digit string")
        if self.byte() != 0x3B:
            raise self.fail("missing ';'")
        return int(raw)

    def term(self) -> Term:
        tag = self.byte()
        if tag == 0x23:  # '#'
            return Numeral(self.digits())
        if tag == 0x78:  # 'x'
            return Var()
        if tag == 0x6E:  # 'n'
            return Neg(self.term())
        if tag in _TAG_TERM:
            return _TAG_TERM[tag](self.term(), self.term())
        self.pos -= 1
        raise self.fail("bad term tag")

    def formula(self) -> Formula:
        tag = self.byte()
        if tag == 0x46:  # 'F'
            return Falsum()
        if tag == 0x51:  # 'Q'
            k = self.digits()
            if k == 0:
                raise self.fail("day index 0")
            return DayAtom(k)
        if tag in (0x50, 0x4B):  # 'P', 'K'
            return CodePred(chr(tag), self.term())
        if tag == 0x7E:  # '~'
            return Not(self.formula())
        if tag in _TAG_BINARY:
            return _TAG_BINARY[tag](self.formula(), self.formula())
        self.pos -= 1
        raise self.fail("bad formula tag")

    def proof(self) -> Proof:
        if self.byte() != 0x5B:  # '['
            raise self.fail("expected proof")
        steps = []
        while self.peek() == 0x7B:  # '{'
            self.pos += 1
            formula = self.formula()
            if self.byte() != 0x72:  # 'r'
                raise self.fail("expected rule")
            start = self.pos
            while self.peek() in _RULE_CHARS:
                self.pos += 1
            rule = self.data[start : self.pos].decode()
            if not rule or self.byte() != 0x3B:
                raise self.fail("bad rule name")
            premises = []
            while self.peek() == 0x70:  # 'p'
                self.pos += 1
                premises.append(self.digits())
            subs = []
            while self.peek() == 0x5B:
                subs.append(self.proof())
            if self.byte() != 0x7D:  # '}'
                raise self.fail("expected end of step")
            steps.append(Step(formula, rule, tuple(premises), tuple(subs)))
        if not steps or self.byte() != 0x5D:  # ']'
            raise self.fail("malformed proof")
        return Proof(tuple(steps))

    def done(self) -> None:
        if self.pos != len(self.data):
            raise self.fail("trailing bytes")


def decode(c: int) -> Formula:
    r = _Reader(_to_bytes(c))
    f = r.formula()
    r.done()
    return f


def is_formula_code(c: int) -> bool:
    try:
        decode(c)
    except CodeError:
        return False
    return True


def _require_formula_code(c: int) -> bytes:
    data = _to_bytes(c)
    r = _Reader(data)
    r.formula()
    r.done()
    return data


# code-level connectives


def neg_code(c: int) -> int:
    """Code of ``~Q`` given the code of ``Q``."""
    data = _require_formula_code(c)
    return _from_bytes(b"~" + data)


def conj_code(c1: int, c2: int) -> int:
    return _from_bytes(b"&" + _require_formula_code(c1) + _require_formula_code(c2))


def imp_code(c1: int, c2: int) -> int:
    return _from_bytes(b">" + _require_formula_code(c1) + _require_formula_code(c2))


def diag(m: int, n: int) -> int:
    """Code of the formula coded by ``m`` with its free variable replaced by the numeral ``n``.

    Works directly on the byte string: every variable byte is swapped for
    the numeral's digits while the rest is copied through the grammar.
    """
    if n < 0:
        raise CodeError("numeral must be non-negative")
    data = _to_bytes(m)
    numeral = b"#" + str(n).encode() + b";"
    out = bytearray()
    r = _Reader(data)

    def term() -> None:
        start = r.pos
        tag = r.byte()
        if tag == 0x78:
            out.extend(numeral)
        elif tag == 0x23:
            r.digits()
            out.extend(data[start : r.pos])
        elif tag == 0x6E:
            out.append(tag)
            term()
        elif tag in _TAG_TERM:
            out.append(tag)
            term()
            term()
        else:
            r.pos -= 1
            raise r.fail("bad term tag")

    def formula() -> None:
        start = r.pos
        tag = r.byte()
        if tag == 0x51:
            if r.digits() == 0:
                raise r.fail("day index 0")
            out.extend(data[start : r.pos])
        elif tag == 0x46:
            out.append(tag)
        elif tag in (0x50, 0x4B):
            out.append(tag)
            term()
        elif tag == 0x7E:
            out.append(tag)
            formula()
        elif tag in _TAG_BINARY:
            out.append(tag)
            formula()
            formula()
        else:
            r.pos -= 1
            raise r.fail("bad formula tag")

    formula()
    r.done()
    return _from_bytes(out)


def eval_term(t: Term) -> int:
    """Value of a closed term: numerals denote themselves, operators act on codes."""
    if isinstance(t, Numeral):
        return t.value
    if isinstance(t, Var):
        raise CodeError("open term: contains the free variable x")
    if isinstance(t, Neg):
        return neg_code(eval_term(t.t))
    if isinstance(t, Conj):
        return conj_code(eval_term(t.t1), eval_term(t.t2))
    if isinstance(t, Imp):
        return imp_code(eval_term(t.t1), eval_term(t.t2))
    return diag(eval_term(t.t1), eval_term(t.t2))


# proofs


def _proof_bytes(p: Proof, out: bytearray) -> None:
    out += b"["
    for s in p.steps:
        out += b"{"
        _formula_bytes(s.formula, out)
        out += b"r" + s.rule.encode() + b";"
        for i in s.premises:
            out += b"p" + str(i).encode() + b";"
        for sub in s.subproofs:
            _proof_bytes(sub, out)
        out += b"}"
    out += b"]"


def proof_code(p: Proof) -> int:
    """Code of a proof; step labels are display metadata and are not coded."""
    if not p.steps:
        raise ValueError("empty proof")
    for s in p.walk():
        if not s.rule or any(ch not in _RULE_CHARS for ch in s.rule.encode()):
            raise ValueError(f"rule name {s.rule!r} cannot be coded")
    out = bytearray()
    _proof_bytes(p, out)
    return _from_bytes(out)


def decode_proof(c: int) -> Proof:
    r = _Reader(_to_bytes(c))
    p = r.proof()
    r.done()
    return p


def check_proof_code(i: int, j: int, rules=None) -> bool:
    """The proof relation: ``i`` codes a kernel-valid proof of the sentence coded ``j``.

    ``rules`` defaults to the Fitch rule set. Never raises on bad input.
    """
    from .selfref.kernel import FITCH, check

    try:
        p = decode_proof(i)
    except CodeError:
        return False
    if not check(p, rules or FITCH).accepted:
        return False
    try:
        return encode(p.conclusion) == j
    except FragmentError:
        return False


def digit_length(c: int) -> int:
    return len(str(c))


def abbreviate(c: int, width: int = 16) -> str:
    """Display form: leading and trailing digits, digit count and a content hash."""
    s = str(c)
    digest = hashlib.sha256(s.encode()).hexdigest()[:16]
    if len(s) <= 2 * width + 3:
        return s
    return f"{s[:width]}...{s[-width:]} ({len(s)} digits, sha256:{digest})"
