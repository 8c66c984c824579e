"""Exam schedules that maximize expected surprise.

Days are numbered 1..m. The hazard of day k is the probability that the exam
falls on day k given that it has not happened before; hazards are indexed
from the end, ``q[n]`` being the hazard of the day with n days after it, so
``q[0] = 1``. The surprise of an exam on day k is ``ln(hazard_k)`` and the
objective is its expectation, a non-positive number whose magnitude is
maximized.

The optimal hazards satisfy ``q[n] = exp(s[n-1] - 1)`` and
``s[n] = s[n-1] - q[n]`` with ``s[0] = 0``, where ``s[n]`` is the optimal
expected surprise of an (n + 1)-day week. Neither recursion mentions m.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

NORMALIZATION_TOL = 1e-12


class ScheduleError(ValueError):
    pass


def probabilities_from_hazards(q: list[float]) -> list[float]:
    """Unconditional day probabilities; ``q`` is indexed from the last day."""
    m = len(q)
    p, survive = [], 1.0
    for k in range(1, m + 1):
        hazard = q[m - k]
        p.append(survive * hazard)
        survive *= 1.0 - hazard
    return p


def hazards_from_probabilities(p: list[float]) -> list[float]:
    """Inverse of :func:`probabilities_from_hazards`; days that cannot be reached get hazard 1."""
    m = len(p)
    q = [1.0] * m
    remaining = 1.0
    for k, pk in enumerate(p, 1):
        if remaining > NORMALIZATION_TOL:
            q[m - k] = min(1.0, pk / remaining)
        remaining -= pk
    q[0] = 1.0
    return q


def suffix_values(q: list[float]) -> list[float]:
    """``s[n]``: expected surprise over the last n + 1 days given the exam is still to come."""
    s = [0.0]
    for n in range(1, len(q)):
        qn = q[n]
        s.append(qn * math.log(qn) + (1.0 - qn) * s[-1])
    return s


@dataclass(frozen=True)
class HazardSchedule:
    m: int
    q: tuple[float, ...]
    s: tuple[float, ...]
    p: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.m < 1 or len(self.q) != self.m or len(self.s) != self.m:
            raise ScheduleError("schedule needs m >= 1 hazards and accumulator values")
        if self.q[0] != 1.0:
            raise ScheduleError("the last day must be certain (q[0] = 1)")
        if not all(0.0 < qn <= 1.0 for qn in self.q):
            raise ScheduleError("hazards must lie in (0, 1]")
        if not self.p:
            object.__setattr__(self, "p", tuple(probabilities_from_hazards(list(self.q))))
        if abs(sum(self.p) - 1.0) > NORMALIZATION_TOL:
            raise ScheduleError(f"probabilities sum to {sum(self.p)!r}")

    def hazard(self, day: int) -> float:
        return self.q[self.m - day]

    def cumulative(self) -> list[float]:
        out, total = [], 0.0
        for pk in self.p:
            total += pk
            out.append(total)
        return out

    def rows(self) -> list[dict[str, float]]:
        return [
            {"day": k, "p": self.p[k - 1], "q": self.hazard(k), "cumulative": c}
            for k, c in enumerate(self.cumulative(), 1)
        ]

    def to_json(self) -> dict[str, Any]:
        return {
            "m": self.m,
            "q": list(self.q),
            "s": list(self.s),
            "p": list(self.p),
            "expected_surprise": expected_surprise(self),
        }


def narveson(m: int) -> HazardSchedule:
    if m < 1:
        raise ScheduleError("need at least one day")
    q, s = [1.0], [0.0]
    for _ in range(1, m):
        qn = math.exp(s[-1] - 1.0)
        q.append(qn)
        s.append(s[-1] - qn)
    return HazardSchedule(m, tuple(q), tuple(s))


def from_probabilities(p: list[float]) -> HazardSchedule:
    if not p or any(x < 0 for x in p):
        raise ScheduleError("probabilities must be non-negative and non-empty")
    if abs(sum(p) - 1.0) > NORMALIZATION_TOL:
        raise ScheduleError(f"probabilities sum to {sum(p)!r}")
    q = hazards_from_probabilities(list(p))
    for n, qn in enumerate(q):
        if qn <= 0.0:
            raise ScheduleError(f"zero hazard on reachable day {len(p) - n}")
    return HazardSchedule(len(p), tuple(q), tuple(suffix_values(q)), tuple(p))


def expected_surprise(h: HazardSchedule) -> float:
    """``sum_k p_k ln(hazard_k)`` by direct summation over days."""
    total = 0.0
    for k, pk in enumerate(h.p, 1):
        if pk == 0.0:
            continue
        hazard = h.hazard(k)
        if hazard <= 0.0:
            raise ScheduleError(f"zero hazard on reachable day {k}")
        total += pk * math.log(hazard)
    return total


def one_step_objective(q: float, s_prev: float) -> float:
    """Expected surprise of a suffix whose first hazard is q and whose remainder is worth s_prev."""
    return q * math.log(q) + (1.0 - q) * s_prev


def schedule_csv(h: HazardSchedule) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["day", "p", "q", "cumulative"])
    for r in h.rows():
        w.writerow([r["day"], f"{r['p']:.6f}", f"{r['q']:.6f}", f"{r['cumulative']:.6f}"])
    return buf.getvalue()


# numerical oracle


@dataclass(frozen=True)
class OracleConfig:
    initial_step: float = 1e-2
    rounds: int = 3
    seed: int = 20240601
    perturbations: int = 500
    perturbation_scale: float = 1e-3


@dataclass(frozen=True)
class OracleResult:
    m: int
    q: tuple[float, ...]
    p: tuple[float, ...]
    value: float
    max_perturbation_gain: float


def _grid_minimize(objective, step: float, rounds: int) -> float:
    lo, hi = step, 1.0
    best = 1.0
    for _ in range(rounds):
        count = int(round((hi - lo) / step)) + 1
        grid = np.clip(np.linspace(lo, hi, count), 1e-15, 1.0)
        best = float(grid[int(np.argmin(objective(grid)))])
        lo, hi = max(best - step, step / 10), min(best + step, 1.0)
        step /= 10
    return best


def oracle_maximize(m: int, config: OracleConfig = OracleConfig()) -> OracleResult:
    """Maximize |expected surprise| numerically, one hazard at a time from the last day back.

    Each hazard is chosen by grid search on the suffix value, refined by a
    factor of ten per round. The resulting vector is then compared with
    random perturbations of the day probabilities.
    """
    if m < 1:
        raise ScheduleError("need at least one day")
    q, s = [1.0], 0.0
    for _ in range(1, m):
        prev = s

        def objective(x, prev=prev):
            return x * np.log(x) + (1.0 - x) * prev

        qn = _grid_minimize(objective, config.initial_step, config.rounds)
        q.append(qn)
        s = float(objective(np.array(qn)))
    p = probabilities_from_hazards(q)
    value = _surprise_of(np.array(p))
    gain = _perturbation_gain(np.array(p), value, config)
    return OracleResult(m, tuple(q), tuple(p), value, gain)


def _surprise_of(p: np.ndarray) -> float:
    remaining = 1.0 - np.concatenate(([0.0], np.cumsum(p)[:-1]))
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / remaining[mask])))


def _perturbation_gain(p: np.ndarray, value: float, config: OracleConfig) -> float:
    """Largest increase of |expected surprise| seen among random nearby schedules."""
    if len(p) == 1:
        return 0.0
    rng = np.random.default_rng(config.seed)
    best = -math.inf
    for _ in range(config.perturbations):
        trial = np.clip(p + rng.normal(0.0, config.perturbation_scale, len(p)), 1e-12, None)
        trial /= trial.sum()
        best = max(best, abs(_surprise_of(trial)) - abs(value))
    return best


# horizon independence


@dataclass(frozen=True)
class SuffixReport:
    m: int
    recursion_exact: bool
    oracle_max_diff: float
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def suffix_invariance_check(
    m: int, tol: float = 1e-3, config: OracleConfig = OracleConfig()
) -> SuffixReport:
    """Compare the hazards of the m-day and (m + 1)-day schedules on the m shared indices."""
    if m < 2:
        raise ScheduleError("need at least two days")
    violations = []
    a, b = narveson(m).q, narveson(m + 1).q
    for n in range(m):
        if a[n] != b[n]:
            violations.append(f"recursion differs at q[{n}]: {a[n]!r} vs {b[n]!r}")
    exact = not violations
    oa, ob = oracle_maximize(m, config).q, oracle_maximize(m + 1, config).q
    diff = 0.0
    for n in range(m):
        d = abs(oa[n] - ob[n])
        diff = max(diff, d)
        if d > tol:
            violations.append(f"oracle differs at q[{n}] by {d:.3g}")
    return SuffixReport(m, exact, diff, tuple(violations))
