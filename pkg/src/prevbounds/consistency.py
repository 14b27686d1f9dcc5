"""Consistency verdicts and natural extension for assessments.

The credal set of an assessment is the polytope of probability vectors
``p`` with ``E_p(X_j) >= lpr(X_j)`` for every entry.  Avoiding sure loss
is non-emptiness of that polytope, coherence is tightness of its lower
envelope on every entry, and 2-coherence is checked pair by pair with a
small normalised LP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import lp
from .core import Assessment, Gamble
from .errors import DomainMismatch, EmptyCredalSet

GAP_TOL = 1e-8
T_TOL = 1e-9

ASL = "asl"
COHERENCE = "coherence"
TWO_COHERENCE = "2coherence"


@dataclass(frozen=True, eq=False)
class CredalPolytope:
    assessment: Assessment
    mean_constraints: tuple[tuple[Gamble, float], ...] = ()

    def __post_init__(self):
        mc = tuple((g, float(v)) for g, v in self.mean_constraints)
        for g, _ in mc:
            if g.partition != self.assessment.partition:
                raise DomainMismatch("mean constraint gamble is not on the assessment's partition")
        object.__setattr__(self, "mean_constraints", mc)

    @property
    def n(self) -> int:
        return self.assessment.partition.n

    def ge_constraints(self) -> list:
        return [(e.gamble.values, e.lower) for e in self.assessment]

    def eq_constraints(self) -> list:
        return [(g.values, v) for g, v in self.mean_constraints]

    def program(self, objective) -> lp.LinearProgram:
        return lp.LinearProgram(objective, self.ge_constraints(), self.eq_constraints(), simplex_constraint=True)

    def with_mean(self, g: Gamble, value: float) -> "CredalPolytope":
        return CredalPolytope(self.assessment, (*self.mean_constraints, (g, value)))

    def feasible_point(self) -> np.ndarray | None:
        res = lp.solve(self.program(np.zeros(self.n)))
        return res.solution if res.optimal else None

    def is_empty(self) -> bool:
        return self.feasible_point() is None

    def vertices(self) -> list[np.ndarray]:
        return lp.enumerate_vertices(self.ge_constraints(), self.eq_constraints(), simplex_constraint=True, n=self.n)

    def contains(self, p, tol: float = 1e-9) -> bool:
        p = np.asarray(p, dtype=float)
        return self.program(np.zeros(self.n)).max_violation(p) <= tol


@dataclass(frozen=True)
class ConsistencyReport:
    level_checked: str
    passed: bool
    witness: np.ndarray | None = field(default=None, repr=False)
    gaps: dict[str, float] = field(default_factory=dict)
    failing_pair: tuple[str, str] | None = None
    pair_solution: dict[str, float] | None = None
    notes: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def check_asl(a: Assessment) -> ConsistencyReport:
    p = CredalPolytope(a).feasible_point()
    if p is None:
        return ConsistencyReport(ASL, False, notes="credal set is empty")
    return ConsistencyReport(ASL, True, witness=p)


def check_coherence(a: Assessment) -> ConsistencyReport:
    """Coherence as envelope tightness: ``min_{p in M} E_p(X_j) == lpr(X_j)`` for all j."""
    poly = CredalPolytope(a)
    asl = check_asl(a)
    if not asl.passed:
        return ConsistencyReport(COHERENCE, False, notes="does not avoid sure loss")
    gaps = {}
    for e in a:
        env = credal_optimize(poly, e.gamble, "min")
        gaps[e.name] = e.lower - env
    passed = all(g >= -GAP_TOL for g in gaps.values())
    return ConsistencyReport(COHERENCE, passed, witness=asl.witness, gaps=gaps)


def _pair_program(d0: np.ndarray, d1: np.ndarray) -> lp.LinearProgram:
    # variables (s1, s0+, s0-, t); minimise t
    ge = [([-d1[i], d0[i], -d0[i], 1.0], 0.0) for i in range(d0.shape[0])]
    ge += [([1.0, 0, 0, 0], 0.0), ([0, 1.0, 0, 0], 0.0), ([0, 0, 1.0, 0], 0.0)]
    eq = [([1.0, 1.0, 1.0, 0.0], 1.0)]
    return lp.LinearProgram([0, 0, 0, 1.0], ge, eq)


def two_coherence_pair(a: Assessment, name0: str, name1: str) -> dict[str, float]:
    """Optimal ``(s0, s1, t)`` of the normalised gain LP for the ordered pair."""
    e0, e1 = a.entry(name0), a.entry(name1)
    d0 = e0.gamble.values - e0.lower
    d1 = e1.gamble.values - e1.lower
    res = lp.solve(_pair_program(d0, d1))
    s1, s0p, s0m, t = res.solution
    return {"s0": float(s0p - s0m), "s1": float(s1), "t": float(t)}


def check_2coherence(a: Assessment) -> ConsistencyReport:
    """Pass iff no ordered pair admits a uniformly negative two-term gain."""
    names = a.names()
    worst = None
    for n0 in names:
        for n1 in names:
            sol = two_coherence_pair(a, n0, n1)
            if sol["t"] < -T_TOL:
                return ConsistencyReport(TWO_COHERENCE, False, failing_pair=(n0, n1), pair_solution=sol)
            if worst is None or sol["t"] < worst["t"]:
                worst = sol
    return ConsistencyReport(TWO_COHERENCE, True, pair_solution=worst)


CHECKS = {ASL: check_asl, COHERENCE: check_coherence, TWO_COHERENCE: check_2coherence}


def credal_optimize(poly: CredalPolytope, y: Gamble, sense: str = "min") -> float:
    value, _ = credal_optimum(poly, y, sense)
    return value


def credal_optimum(poly: CredalPolytope, y: Gamble, sense: str = "min") -> tuple[float, np.ndarray]:
    """Optimal ``E_p(y)`` over the polytope and an optimal ``p``."""
    if y.partition != poly.assessment.partition:
        raise DomainMismatch("objective gamble is not on the assessment's partition")
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    sign = 1.0 if sense == "min" else -1.0
    res = lp.solve(poly.program(sign * y.values))
    if not res.optimal:
        raise EmptyCredalSet("the credal set is empty")
    return float(y.values @ res.solution), res.solution


def natural_extension(a: Assessment, y: Gamble) -> float:
    """Lower envelope of ``E_p(y)`` over the credal set of ``a``."""
    return credal_optimize(CredalPolytope(a), y, "min")


def upper_extension(a: Assessment, y: Gamble) -> float:
    return credal_optimize(CredalPolytope(a), y, "max")


@dataclass(frozen=True)
class SublinearSum:
    """Upper prevision bound for a sum gamble; only valid under coherence."""

    value: float
    consistency_required: str = COHERENCE

    def __float__(self) -> float:
        return self.value


def sublinear_upper_sum(upper_values: Sequence[float] | Iterable[float]) -> SublinearSum:
    return SublinearSum(float(sum(float(u) for u in upper_values)))
