"""Build, check and tabulate the surprise examination arguments from the command line.

Exit status: 0 success, 2 usage error, 3 domain precondition, 4 check failure.
Every proof is re-verified by its kernel before it is written out.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from . import epistemic, games, surprise
from .formula import proof as transcript
from .formula.proof import FORMAT_VERSION, Bindings, Proof
from .formula.syntax import ParseError, to_text
from .godel import abbreviate
from .selfref import kernel
from .selfref.fitch import ConstructionError, build_fitch, derive_refutation
from .selfref.knower import build_knower, derive_knower_contradiction

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CHECK = 0, 2, 3, 4
FORMAT_ENV = "SURPRISE_EXAM_FORMAT"
FORMATS = ("text", "json", "csv")
RULE_CHOICES = ("fitch", "knower", "epistemic")

DOMAIN_ERRORS = (
    ConstructionError,
    epistemic.EpistemicError,
    games.GameError,
    surprise.ScheduleError,
)


class CheckFailure(Exception):
    pass


class DomainError(ValueError):
    pass


@dataclass
class Artifact:
    text: str
    doc: dict[str, Any]
    csv: str | None = None

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.doc, indent=2) + "\n"
        if fmt == "csv":
            if self.csv is None:
                raise DomainError("this command has no CSV output")
            return self.csv
        return self.text


# checking


def _checker(rules: str, system: epistemic.EpistemicSystem | None = None) -> Callable[[Proof], Any]:
    if rules == "epistemic":
        if system is None:
            raise DomainError("an epistemic check needs the announcement binding A or a system")
        return lambda p: epistemic.check(p, system)
    return lambda p: kernel.check(p, kernel.RULE_SETS[rules])


def _verified(name: str, proof: Proof, checker: Callable[[Proof], Any]) -> Proof:
    report = checker(proof)
    if not report.accepted:
        raise CheckFailure(f"{name}: {report}")
    return proof


def _show_code(full: bool) -> Callable[[int], str]:
    return str if full else abbreviate


def _proof_section(name: str, proof: Proof, bindings: Bindings, full: bool) -> str:
    return f"# proof {name}\n" + transcript.to_text(proof, bindings, _show_code(full))


# subcommands


def run_fitch(args: argparse.Namespace) -> Artifact:
    connective = "xor" if args.xor else "or"
    fc = build_fitch(args.days, connective)
    proof = _verified("refutation", derive_refutation(fc), _checker("fitch"))
    bindings = fc.bindings()
    text = (
        f"# Fitch refutation, {fc.m} day(s), connective {connective}\n"
        "# rules: fitch\n"
        "# kernel: accepted\n" + _proof_section("refutation", proof, bindings, args.full_codes)
    )
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "fitch",
        "rules": "fitch",
        "construction": fc.to_json(),
        "proofs": {"refutation": transcript.to_json(proof, bindings)},
    }
    return Artifact(text, doc)


def run_knower(args: argparse.Namespace) -> Artifact:
    kc = build_knower()
    proof = _verified("contradiction", derive_knower_contradiction(kc), _checker("knower"))
    bindings = kc.bindings()
    text = (
        "# Knower paradox: S <-> K[#~S] with factive, known-to-be-factive K\n"
        "# rules: knower\n"
        "# kernel: accepted\n" + _proof_section("contradiction", proof, bindings, args.full_codes)
    )
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "knower",
        "rules": "knower",
        "construction": {"h": str(kc.h), "sentence": to_text(kc.sentence)},
        "proofs": {"contradiction": transcript.to_json(proof, bindings)},
    }
    return Artifact(text, doc)


def _epistemic_system(days: int, agents: str) -> epistemic.EpistemicSystem:
    if agents == "students":
        return epistemic.EpistemicSystem.students(days)
    return epistemic.EpistemicSystem(days)


def run_epistemic(args: argparse.Namespace) -> Artifact:
    sys_ = _epistemic_system(args.days, args.agents)
    check = _checker("epistemic", sys_)
    proofs: dict[str, Proof] = {}
    if sys_.m >= 2:
        proofs["lemma"] = _verified("lemma", epistemic.derive_elimination_lemma(sys_), check)
    proofs["contradiction"] = _verified(
        "contradiction", epistemic.derive_contradiction(sys_), check
    )
    bindings = epistemic.bindings(sys_)
    ann = to_text(sys_.announcement)
    lines = [
        f"# epistemic derivation, {sys_.m} day(s), agents {' '.join(sys_.agents)}",
        "# rules: epistemic",
        f"# announcement: {ann}",
        f"# hypothesis: {to_text(sys_.hypothesis, abbrevs={sys_.announcement: 'A'})}",
        "# kernel: accepted",
    ]
    text = "\n".join(lines) + "\n"
    text += "".join(_proof_section(k, p, bindings, True) for k, p in proofs.items())
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "epistemic",
        "rules": "epistemic",
        "system": sys_.to_json(),
        "announcement": ann,
        "proofs": {k: transcript.to_json(p, bindings) for k, p in proofs.items()},
    }
    return Artifact(text, doc)


def _value_text(v) -> str:
    return f"({v[0]}, {v[1]})"


def run_ipd(args: argparse.Namespace) -> Artifact:
    pm = games.PayoffMatrix.parse(args.payoffs) if args.payoffs else games.PayoffMatrix()
    n = args.rounds
    spe = games.solve_spe(n, pm)
    by_round = list(zip(spe.profile.strategies[0].by_round, spe.profile.strategies[1].by_round))
    always_defect = all(a == b == games.D for a, b in by_round)
    lines = [
        f"# iterated prisoner's dilemma, {n} round(s), payoffs "
        f"T={pm.T} R={pm.R} P={pm.P} S={pm.S}",
        "subgame-perfect equilibrium (backward induction):",
    ]
    lines += [f"  round {k}: {a} {b} at every history" for k, (a, b) in enumerate(by_round, 1)]
    lines.append(f"  value: {_value_text(spe.value)}")
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "ipd",
        "rounds": n,
        "payoffs": pm.to_json(),
        "spe": {
            "by_round": [a + b for a, b in by_round],
            "always_defect": always_defect,
            "path": [a + b for a, b in spe.path],
            "value": [str(v) for v in spe.value],
        },
        "equilibria": None,
    }
    table = None
    if n <= games.MAX_ENUMERATION_ROUNDS:
        eqs = games.enumerate_pure_nash(n, pm)
        size = len(games.pure_strategies(n))
        all_defect = all(games.is_all_defect(e.path) for e in eqs)
        lines.append(f"pure Nash equilibria (exhaustive over {size} x {size} profiles): {len(eqs)}")
        lines.append(f"  every play path all-defect: {'yes' if all_defect else 'no'}")
        for e in eqs:
            s1, s2 = (games.strategy_text(s, n) for s in e.profile.strategies)
            path = games.history_text(e.path)
            lines.append(f"  {s1}  {s2}  path {path}  value {_value_text(e.value)}")
        doc["equilibria"] = [e.to_json() for e in eqs]
        table = _normal_form_csv(n, pm, eqs)
    return Artifact("\n".join(lines) + "\n", doc, table)


def _normal_form_csv(n: int, pm: games.PayoffMatrix, eqs: list[games.Equilibrium]) -> str:
    strategies, table = games.normal_form(n, pm)
    names = [games.strategy_text(s, n) for s in strategies]
    nash = {tuple(games.strategy_text(s, n) for s in e.profile.strategies) for e in eqs}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["row_strategy", "col_strategy", "u1", "u2", "nash"])
    for i, row in enumerate(table):
        for j, (u1, u2) in enumerate(row):
            w.writerow([names[i], names[j], u1, u2, int((names[i], names[j]) in nash)])
    return buf.getvalue()


def run_surprise(args: argparse.Namespace) -> Artifact:
    h = surprise.narveson(args.days)
    value = surprise.expected_surprise(h)
    rows = h.rows()
    oracle = surprise.oracle_maximize(args.days) if args.oracle else None
    header = f"{'day':>4}  {'p':>9}  {'q':>9}  {'cumulative':>10}"
    if oracle:
        header += f"  {'p_oracle':>9}"
    lines = [f"# maximum expected surprise schedule, {h.m} day(s)", header]
    for r in rows:
        line = f"{r['day']:>4}  {r['p']:>9.6f}  {r['q']:>9.6f}  {r['cumulative']:>10.6f}"
        if oracle:
            line += f"  {oracle.p[r['day'] - 1]:>9.6f}"
        lines.append(line)
    lines.append(f"expected surprise: {value:.6f} (magnitude {abs(value):.6f})")
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "surprise",
        "m": h.m,
        "rows": [
            {"day": r["day"], "p": r["p"], "q": r["q"], "cumulative": r["cumulative"]}
            for r in rows
        ],
        "s": list(h.s),
        "expected_surprise": value,
        "oracle": None,
    }
    table = surprise.schedule_csv(h)
    if oracle:
        diff = max(abs(a - b) for a, b in zip(oracle.p, h.p))
        lines.append(
            f"oracle: max |p - p_oracle| = {diff:.2e}, "
            f"best perturbation gain = {oracle.max_perturbation_gain:.2e}"
        )
        doc["oracle"] = {
            "p": list(oracle.p),
            "q": list(oracle.q),
            "expected_surprise": oracle.value,
            "max_abs_diff": diff,
            "max_perturbation_gain": oracle.max_perturbation_gain,
        }
        table = _with_oracle_column(table, oracle)
    return Artifact("\n".join(lines) + "\n", doc, table)


def _with_oracle_column(table: str, oracle: surprise.OracleResult) -> str:
    rows = table.splitlines()
    out = [rows[0] + ",p_oracle"]
    out += [f"{row},{p:.6f}" for row, p in zip(rows[1:], oracle.p)]
    return "\n".join(out) + "\n"


# check


_SECTION = re.compile(r"^# proof (\S+)\s*$", re.M)
_RULES_LINE = re.compile(r"^# rules: (\S+)\s*$", re.M)


def _load_proofs(text: str) -> tuple[str | None, dict[str, tuple[Proof, Bindings]], dict]:
    """Proofs keyed by name, plus the declared rule set and any JSON metadata."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        if doc.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {doc.get('format_version')!r}")
        raw = doc["proofs"] if "proofs" in doc else {"proof": doc}
        return doc.get("rules"), {k: transcript.from_json(v) for k, v in raw.items()}, doc
    m = _RULES_LINE.search(text)
    rules = m.group(1) if m else None
    marks = list(_SECTION.finditer(text))
    if not marks:
        return rules, {"proof": transcript.from_text(text)}, {}
    proofs = {}
    for i, mark in enumerate(marks):
        end = marks[i + 1].start() if i + 1 < len(marks) else len(text)
        # keep line numbers of the whole file in error messages
        body = "\n" * text.count("\n", 0, mark.end()) + text[mark.end() : end]
        proofs[mark.group(1)] = transcript.from_text(body)
    return rules, proofs, {}


def run_check(args: argparse.Namespace) -> tuple[str, int]:
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {args.file}: {e.strerror}") from None
    try:
        declared, proofs, doc = _load_proofs(text)
    except (ValueError, KeyError, TypeError, ParseError) as e:
        return f"rejected: malformed transcript: {e}\n", EXIT_CHECK
    rules = args.rules or declared or "fitch"
    if rules not in RULE_CHOICES:
        return f"rejected: unknown rule set {rules!r}\n", EXIT_CHECK
    lines, status = [], EXIT_OK
    for name, (proof, bindings) in proofs.items():
        system = None
        if rules == "epistemic":
            try:
                if "A" in bindings.formulas:
                    system = epistemic.system_from_announcement(bindings.formulas["A"])
                elif "system" in doc:
                    s = doc["system"]
                    system = epistemic.EpistemicSystem(
                        s["m"], tuple(s["agents"]), frozenset(s["rules"])
                    )
            except (epistemic.EpistemicError, KeyError, TypeError) as e:
                return f"rejected: {name}: bad epistemic system: {e}\n", EXIT_CHECK
            if system is None:
                return f"rejected: {name}: no announcement binding A\n", EXIT_CHECK
        report = _checker(rules, system)(proof)
        if report.accepted:
            lines.append(f"accepted: {name} ({len(proof)} steps, {rules} rules)")
        else:
            lines.append(f"rejected: {name}: {report}")
            status = EXIT_CHECK
    return "\n".join(lines) + "\n", status


# goldens


def regenerate_goldens(directory: str | Path) -> list[Path]:
    """Write every golden transcript and table; output is byte-identical across runs."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def put(name: str, content: str) -> None:
        path = root / name
        path.write_text(content)
        written.append(path)

    def ns(**kw) -> argparse.Namespace:
        return argparse.Namespace(full_codes=True, **kw)

    for m in (1, 2, 3):
        art = run_fitch(ns(days=m, xor=False))
        put(f"fitch-m{m}.txt", art.render("text"))
        put(f"fitch-m{m}.json", art.render("json"))
    art = run_fitch(ns(days=2, xor=True))
    put("fitch-m2-xor.txt", art.render("text"))
    put("fitch-m2-xor.json", art.render("json"))
    for m in range(1, 6):
        art = run_epistemic(ns(days=m, agents="days"))
        put(f"epistemic-m{m}.txt", art.render("text"))
        put(f"epistemic-m{m}.json", art.render("json"))
    art = run_epistemic(ns(days=5, agents="students"))
    put("epistemic-m5-students.txt", art.render("text"))
    art = run_knower(ns())
    put("knower.txt", art.render("text"))
    put("knower.json", art.render("json"))
    for n in (1, 2):
        art = run_ipd(ns(rounds=n, payoffs=None))
        put(f"ipd-n{n}.txt", art.render("text"))
        put(f"ipd-n{n}.json", art.render("json"))
        put(f"ipd-n{n}.csv", art.render("csv"))
    for m in range(1, 8):
        art = run_surprise(ns(days=m, oracle=False))
        put(f"surprise-m{m}.csv", art.render("csv"))
        put(f"surprise-m{m}.json", art.render("json"))
    return written


# argument parsing


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    default_format = os.environ.get(FORMAT_ENV, "text")
    common = _Parser(add_help=False)
    common.add_argument(
        "--format",
        choices=FORMATS,
        default=default_format if default_format in FORMATS else "text",
        help=f"output format (default from ${FORMAT_ENV}, else text)",
    )
    common.add_argument("--output", "-o", help="write to this file instead of standard output")
    common.add_argument(
        "--full-codes", action="store_true", help="print Gödel numbers in full in text output"
    )

    parser = _Parser(prog="surprise-exam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fitch", parents=[common], help="self-referential announcement and its refutation")
    p.add_argument("--days", type=int, default=2)
    p.add_argument("--xor", action="store_true", help="join the day clauses with exclusive or")

    p = sub.add_parser("epistemic", parents=[common], help="announcement, lemma and contradiction")
    p.add_argument("--days", type=int, default=2)
    p.add_argument("--agents", choices=("days", "students"), default="days")

    sub.add_parser("knower", parents=[common], help="the Knower paradox")

    p = sub.add_parser("ipd", parents=[common], help="iterated prisoner's dilemma")
    p.add_argument("--rounds", type=int, default=2)
    p.add_argument("--payoffs", help="T,R,P,S (default 2,1,0,-2)")

    p = sub.add_parser("surprise", parents=[common], help="maximum expected surprise schedule")
    p.add_argument("--days", type=int, default=5)
    p.add_argument("--oracle", action="store_true", help="compare with the numerical optimizer")
    p.add_argument("--csv", action="store_true", help="shorthand for --format csv")

    p = sub.add_parser("check", help="re-verify a transcript file (text or JSON)")
    p.add_argument("file")
    p.add_argument("--rules", choices=RULE_CHOICES)

    p = sub.add_parser("goldens", help="regenerate golden transcripts and tables")
    p.add_argument("directory")
    return parser


RUNNERS = {
    "fitch": run_fitch,
    "epistemic": run_epistemic,
    "knower": run_knower,
    "ipd": run_ipd,
    "surprise": run_surprise,
}


def _write(content: str, output: str | None) -> None:
    if output:
        Path(output).write_text(content)
    else:
        sys.stdout.write(content)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "check":
            out, status = run_check(args)
            (sys.stdout if status == EXIT_OK else sys.stderr).write(out)
            return status
        if args.command == "goldens":
            for path in regenerate_goldens(args.directory):
                print(path)
            return EXIT_OK
        fmt = "csv" if getattr(args, "csv", False) else args.format
        _write(RUNNERS[args.command](args).render(fmt), args.output)
        return EXIT_OK
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, *DOMAIN_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except CheckFailure as e:
        print(f"internal check failure: {e}", file=sys.stderr)
        return EXIT_CHECK
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
