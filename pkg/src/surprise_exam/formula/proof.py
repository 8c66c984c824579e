"""Proofs as numbered linear transcripts with embedded sub-proofs.

Text form::

    let q1 = 20817
    let S := Q1 & ~P[D(h,h) Imp q1]
    1. S -> Q1 [TAUT] (2)
    2. P[b] [NEC {
      1. S -> Q1 [TAUT] (2)
    }]
    3. ~S [MP 1 2]

``let`` lines bind numeral names (``=``) and formula abbreviations (``:=``).
The bracket holds the rule and premise step numbers; a trailing ``(name)``
is a display label. The JSON form carries the same content as
``{"format_version", "bindings", "steps": [{"step", "formula", "rule",
"premises", "subproofs", "label"?}]}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Mapping

from .syntax import ParseError, Printer, parse
from .tree import Formula, Know, subformulas

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Step:
    formula: Formula
    rule: str
    premises: tuple[int, ...] = ()
    subproofs: tuple[Proof, ...] = ()
    # display only; ignored by equality and by Gödel coding
    label: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Proof:
    steps: tuple[Step, ...]

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self) -> int:
        return len(self.steps)

    def walk(self) -> Iterator[Step]:
        """All steps, sub-proofs included, depth first."""
        for s in self.steps:
            yield s
            for sub in s.subproofs:
                yield from sub.walk()

    def rules_used(self) -> set[str]:
        return {s.rule for s in self.walk()}

    def find_label(self, label: str) -> int | None:
        for i, s in enumerate(self.steps, 1):
            if s.label == label:
                return i
        return None

    def prefix(self, n: int) -> Proof:
        return Proof(self.steps[:n])


class ProofBuilder:
    """Accumulates steps; ``add`` returns the 1-based number of the new step."""

    def __init__(self) -> None:
        self.steps: list[Step] = []

    def add(
        self,
        formula: Formula,
        rule: str,
        *premises: int,
        subproofs: tuple[Proof, ...] | list[Proof] = (),
        label: str | None = None,
    ) -> int:
        self.steps.append(Step(formula, rule, tuple(premises), tuple(subproofs), label))
        return len(self.steps)

    def include(self, proof: Proof) -> int:
        """Append all steps of ``proof`` inline, renumbering premise references."""
        offset = len(self.steps)
        for s in proof.steps:
            self.steps.append(
                Step(s.formula, s.rule, tuple(p + offset for p in s.premises), s.subproofs, s.label)
            )
        return len(self.steps)

    def formula(self, n: int) -> Formula:
        return self.steps[n - 1].formula

    def snapshot(self) -> Proof:
        return Proof(tuple(self.steps))

    build = snapshot


@dataclass
class Bindings:
    numerals: dict[str, int] = field(default_factory=dict)
    formulas: dict[str, Formula] = field(default_factory=dict)

    def printer(self, bare_days: bool | None, upto: str | None = None) -> Printer:
        abbrevs = {}
        for name, f in self.formulas.items():
            if name == upto:
                break
            abbrevs[f] = name
        return Printer(bare_days, {v: k for k, v in self.numerals.items()}, abbrevs)


def _bare_days(proof: Proof, bindings: Bindings) -> bool:
    formulas = [s.formula for s in proof.walk()] + list(bindings.formulas.values())
    return any(isinstance(g, Know) for f in formulas for g in subformulas(f))


# text form


def _step_lines(proof: Proof, pr: Printer, indent: str) -> list[str]:
    lines = []
    for i, s in enumerate(proof.steps, 1):
        head = f"{indent}{i}. {pr(s.formula)} [{' '.join([s.rule, *map(str, s.premises)])}"
        tail = f" ({s.label})" if s.label is not None else ""
        if not s.subproofs:
            lines.append(f"{head}]{tail}")
            continue
        lines.append(head + " {")
        for k, sub in enumerate(s.subproofs):
            if k:
                lines.append(indent + "} {")
            lines.extend(_step_lines(sub, pr, indent + "  "))
        lines.append(f"{indent}}}]{tail}")
    return lines


def to_text(
    proof: Proof, bindings: Bindings | None = None, show_code: Callable[[int], str] = str
) -> str:
    """Transcript text; ``show_code`` formats bound numerals (an abbreviating
    formatter gives a readable but no longer re-readable transcript)."""
    bindings = bindings or Bindings()
    bare = _bare_days(proof, bindings)
    lines = [f"let {name} = {show_code(value)}" for name, value in bindings.numerals.items()]
    for name, f in bindings.formulas.items():
        lines.append(f"let {name} := {bindings.printer(bare, upto=name)(f)}")
    lines.extend(_step_lines(proof, bindings.printer(bare), ""))
    return "\n".join(lines) + "\n"


_LET_NUM = re.compile(r"let ([A-Za-z_][A-Za-z0-9_]*) = (\d+)")
_LET_FORMULA = re.compile(r"let ([A-Za-z_][A-Za-z0-9_]*) := (.*)")
_STEP_HEAD = re.compile(r"(\d+)\. (.*)")
_ANNOTATION = re.compile(r" \[([A-Za-z_]+)((?: \d+)*)(?:\](?: \(([^()]*)\))?| (\{))$")
_CLOSING = re.compile(r"\}\](?: \((.*)\))?")


class TranscriptError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def from_text(text: str) -> tuple[Proof, Bindings]:
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    bindings = Bindings()
    pos = 0
    while pos < len(lines) and lines[pos][1].startswith("let "):
        n, ln = lines[pos]
        m = _LET_NUM.fullmatch(ln)
        if m:
            bindings.numerals[m.group(1)] = int(m.group(2))
        else:
            m = _LET_FORMULA.fullmatch(ln)
            if not m:
                raise TranscriptError("malformed binding (abbreviated codes cannot be re-read)", n)
            try:
                bindings.formulas[m.group(1)] = parse(m.group(2), bindings.numerals, bindings.formulas)
            except ParseError as e:
                raise TranscriptError(str(e), n) from e
        pos += 1
    proof, pos = _read_steps(lines, pos, bindings)
    if pos != len(lines):
        raise TranscriptError("unexpected trailing content", lines[pos][0])
    return proof, bindings


def _read_steps(lines, pos: int, bindings: Bindings) -> tuple[Proof, int]:
    steps = []
    while pos < len(lines) and _STEP_HEAD.fullmatch(lines[pos][1]):
        n, ln = lines[pos]
        m = _STEP_HEAD.fullmatch(ln)
        if int(m.group(1)) != len(steps) + 1:
            raise TranscriptError(f"expected step {len(steps) + 1}", n)
        body = m.group(2)
        ann = _ANNOTATION.search(body)
        if not ann:
            raise TranscriptError("missing rule annotation", n)
        try:
            formula = parse(body[: ann.start()], bindings.numerals, bindings.formulas)
        except ParseError as e:
            raise TranscriptError(str(e), n) from e
        rule, premises = ann.group(1), _ints(ann.group(2))
        pos += 1
        if not ann.group(4):
            steps.append(Step(formula, rule, premises, (), ann.group(3)))
            continue
        subs = []
        while True:
            sub, pos = _read_steps(lines, pos, bindings)
            if not sub.steps:
                raise TranscriptError("empty sub-proof", lines[min(pos, len(lines) - 1)][0])
            subs.append(sub)
            if pos >= len(lines):
                raise TranscriptError("unterminated sub-proof", lines[-1][0])
            ln = lines[pos][1]
            pos += 1
            if ln == "} {":
                continue
            closing = _CLOSING.fullmatch(ln)
            if not closing:
                raise TranscriptError("expected '}]' or '} {'", lines[pos - 1][0])
            label = closing.group(1)
            break
        steps.append(Step(formula, rule, premises, tuple(subs), label))
    return Proof(tuple(steps)), pos


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split())


# JSON form


def _steps_json(proof: Proof, pr: Printer) -> list[dict[str, Any]]:
    out = []
    for i, s in enumerate(proof.steps, 1):
        entry: dict[str, Any] = {
            "step": i,
            "formula": pr(s.formula),
            "rule": s.rule,
            "premises": list(s.premises),
            "subproofs": [_steps_json(sub, pr) for sub in s.subproofs],
        }
        if s.label is not None:
            entry["label"] = s.label
        out.append(entry)
    return out


def to_json(proof: Proof, bindings: Bindings | None = None, **meta: Any) -> dict[str, Any]:
    """JSON-ready dict; numerals are decimal strings so huge codes survive any reader."""
    bindings = bindings or Bindings()
    bare = _bare_days(proof, bindings)
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, **meta}
    doc["bindings"] = {
        "numerals": {k: str(v) for k, v in bindings.numerals.items()},
        "formulas": {k: bindings.printer(bare, upto=k)(f) for k, f in bindings.formulas.items()},
    }
    doc["steps"] = _steps_json(proof, bindings.printer(bare))
    return doc


def from_json(doc: Mapping[str, Any]) -> tuple[Proof, Bindings]:
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
    bindings = Bindings()
    raw = doc.get("bindings", {})
    for k, v in raw.get("numerals", {}).items():
        bindings.numerals[k] = int(v)
    for k, v in raw.get("formulas", {}).items():
        bindings.formulas[k] = parse(v, bindings.numerals, bindings.formulas)
    return _proof_from_json(doc["steps"], bindings), bindings


def _proof_from_json(entries: list[Mapping[str, Any]], bindings: Bindings) -> Proof:
    steps = []
    for i, e in enumerate(entries, 1):
        if e["step"] != i:
            raise ValueError(f"expected step {i}, got {e['step']}")
        steps.append(
            Step(
                parse(e["formula"], bindings.numerals, bindings.formulas),
                e["rule"],
                tuple(int(p) for p in e["premises"]),
                tuple(_proof_from_json(sub, bindings) for sub in e.get("subproofs", [])),
                e.get("label"),
            )
        )
    return Proof(tuple(steps))
