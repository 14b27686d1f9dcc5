"""Dense linear programming and polytope vertex enumeration.

The solver is a plain two-phase tableau simplex with Bland's rule.  It is
meant for the desk-scale programs that credal sets produce (a handful of
atoms, a handful of assessed gambles), where robustness matters more
than speed.

Variables are free unless ``simplex_constraint`` is set, in which case
they are probabilities: ``p >= 0`` and ``sum(p) == 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import MalformedProgram, UnboundedRegion, VertexBudgetExceeded

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
OPT_TOL = 1e-11
VERTEX_TOL = 1e-9
MAX_VERTEX_DIM = 12
MAX_BASES = 400_000


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


def _as_rows(constraints, n: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    rows, rhs = [], []
    for item in constraints:
        try:
            row, b = item
        except (TypeError, ValueError):
            raise MalformedProgram(f"{kind} constraint must be a (row, rhs) pair") from None
        row = np.asarray(row, dtype=float).reshape(-1)
        if row.shape[0] != n:
            raise MalformedProgram(f"{kind} row has length {row.shape[0]}, expected {n}")
        rows.append(row)
        rhs.append(float(b))
    A = np.array(rows, dtype=float).reshape(len(rows), n)
    b = np.array(rhs, dtype=float)
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise MalformedProgram(f"{kind} constraints contain non-finite coefficients")
    return A, b


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``min objective . p`` subject to ``ge`` rows ``>=`` and ``eq`` rows ``==``."""

    objective: np.ndarray
    ge_A: np.ndarray
    ge_b: np.ndarray
    eq_A: np.ndarray
    eq_b: np.ndarray
    simplex_constraint: bool = False

    def __init__(
        self,
        objective: Sequence[float],
        ge_constraints=(),
        eq_constraints=(),
        simplex_constraint: bool = False,
    ):
        c = np.asarray(objective, dtype=float).reshape(-1)
        n = c.shape[0]
        if n == 0:
            raise MalformedProgram("program has no variables")
        if not np.all(np.isfinite(c)):
            raise MalformedProgram("objective contains non-finite coefficients")
        ge_A, ge_b = _as_rows(ge_constraints, n, "ge")
        eq_A, eq_b = _as_rows(eq_constraints, n, "eq")
        for name, val in (("objective", c), ("ge_A", ge_A), ("ge_b", ge_b), ("eq_A", eq_A), ("eq_b", eq_b)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "simplex_constraint", bool(simplex_constraint))

    @property
    def n(self) -> int:
        return self.objective.shape[0]

    @classmethod
    def from_arrays(cls, objective, ge_A=None, ge_b=None, eq_A=None, eq_b=None, simplex_constraint=False):
        ge = [] if ge_A is None else list(zip(np.atleast_2d(ge_A), np.atleast_1d(ge_b)))
        eq = [] if eq_A is None else list(zip(np.atleast_2d(eq_A), np.atleast_1d(eq_b)))
        return cls(objective, ge, eq, simplex_constraint)

    def with_objective(self, objective) -> "LinearProgram":
        return LinearProgram.from_arrays(
            objective,
            self.ge_A if len(self.ge_A) else None, self.ge_b,
            self.eq_A if len(self.eq_A) else None, self.eq_b,
            self.simplex_constraint,
        )

    def max_violation(self, x: np.ndarray) -> float:
        worst = 0.0
        if len(self.ge_A):
            worst = max(worst, float(np.max(self.ge_b - self.ge_A @ x, initial=0.0)))
        if len(self.eq_A):
            worst = max(worst, float(np.max(np.abs(self.eq_A @ x - self.eq_b))))
        if self.simplex_constraint:
            worst = max(worst, float(np.max(-x, initial=0.0)), abs(float(x.sum()) - 1.0))
        return worst


@dataclass(frozen=True)
class LPResult:
    status: Status
    value: float | None = None
    solution: np.ndarray | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    """Row-reduced tableau; the last row holds reduced costs, the last column the rhs."""

    def __init__(self, T: np.ndarray, basis: list[int]):
        self.T = T
        self.basis = basis

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, j] = 0.0
        T[r, j] = 1.0
        self.basis[r] = j

    def price(self, cost: np.ndarray) -> None:
        T = self.T
        T[-1, :] = 0.0
        T[-1, : cost.shape[0]] = cost
        for r, j in enumerate(self.basis):
            if T[-1, j] != 0.0:
                T[-1] -= T[-1, j] * T[r]

    def run(self, ncols: int, max_iter: int = 50_000) -> Status:
        T = self.T
        m = T.shape[0] - 1
        for _ in range(max_iter):
            red = T[-1, :ncols]
            entering = np.flatnonzero(red < -OPT_TOL)
            if entering.size == 0:
                return Status.OPTIMAL
            j = int(entering[0])  # Bland: lowest index
            col = T[:m, j]
            best_r, best_ratio = -1, math.inf
            for r in np.flatnonzero(col > PIVOT_TOL):
                ratio = T[r, -1] / col[r]
                if ratio < best_ratio - 1e-14 or (
                    abs(ratio - best_ratio) <= 1e-14 and self.basis[r] < self.basis[best_r]
                ):
                    best_r, best_ratio = int(r), ratio
            if best_r < 0:
                return Status.UNBOUNDED
            self.pivot(best_r, j)
        raise RuntimeError("simplex iteration limit reached")


def _standard_form(lp: LinearProgram):
    """Rewrite as ``A z = b, z >= 0, b >= 0``; return the map back to ``x``."""
    n = lp.n
    if lp.simplex_constraint:
        D = np.eye(n)
    else:
        D = np.hstack([np.eye(n), -np.eye(n)])  # x = x+ - x-
    nz = D.shape[1]
    mg, me = lp.ge_A.shape[0], lp.eq_A.shape[0]
    rows = []
    rhs = []
    for i in range(mg):
        row = np.zeros(nz + mg)
        row[:nz] = lp.ge_A[i] @ D
        row[nz + i] = -1.0
        rows.append(row)
        rhs.append(lp.ge_b[i])
    for i in range(me):
        row = np.zeros(nz + mg)
        row[:nz] = lp.eq_A[i] @ D
        rows.append(row)
        rhs.append(lp.eq_b[i])
    if lp.simplex_constraint:
        row = np.zeros(nz + mg)
        row[:nz] = 1.0
        rows.append(row)
        rhs.append(1.0)
    A = np.array(rows).reshape(len(rows), nz + mg)
    b = np.array(rhs, dtype=float)
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    c = np.zeros(nz + mg)
    c[:nz] = lp.objective @ D
    return A, b, c, D


def solve(lp: LinearProgram) -> LPResult:
    """Globally minimise ``lp.objective`` over the feasible polyhedron."""
    if not isinstance(lp, LinearProgram):
        raise MalformedProgram("solve expects a LinearProgram")
    A, b, c, D = _standard_form(lp)
    m, N = A.shape
    if m == 0:
        # no constraints at all: free variables
        if np.any(c != 0.0):
            return LPResult(Status.UNBOUNDED)
        return LPResult(Status.OPTIMAL, 0.0, np.zeros(lp.n))

    # phase 1: one artificial per row
    T = np.zeros((m + 1, N + m + 1))
    T[:m, :N] = A
    T[:m, N : N + m] = np.eye(m)
    T[:m, -1] = b
    tab = _Tableau(T, list(range(N, N + m)))
    cost1 = np.zeros(N + m)
    cost1[N:] = 1.0
    tab.price(cost1)
    tab.run(N + m)
    scale = 1.0 + float(np.max(np.abs(b), initial=0.0))
    if -tab.T[-1, -1] > FEAS_TOL * scale:
        return LPResult(Status.INFEASIBLE)

    # drive remaining artificials out, dropping redundant rows
    r = 0
    while r < len(tab.basis):
        if tab.basis[r] >= N:
            cand = np.flatnonzero(np.abs(tab.T[r, :N]) > PIVOT_TOL)
            if cand.size:
                tab.pivot(r, int(cand[0]))
            else:
                tab.T = np.delete(tab.T, r, axis=0)
                del tab.basis[r]
                continue
        r += 1

    # phase 2
    T2 = np.hstack([tab.T[:, :N], tab.T[:, -1:]])
    tab = _Tableau(T2, tab.basis)
    tab.price(c)
    status = tab.run(N)
    if status is Status.UNBOUNDED:
        return LPResult(Status.UNBOUNDED)
    z = np.zeros(N)
    for row, j in enumerate(tab.basis):
        z[j] = tab.T[row, -1]
    x = D @ z[: D.shape[1]]
    if lp.simplex_constraint:
        x = np.where(np.abs(x) < 1e-15, 0.0, x)
    return LPResult(Status.OPTIMAL, float(lp.objective @ x), x)


def _independent_rows(E: np.ndarray, e: np.ndarray, tol: float = 1e-10):
    keep = []
    for i in range(E.shape[0]):
        trial = E[keep + [i]]
        if np.linalg.matrix_rank(trial, tol=tol) == len(keep) + 1:
            keep.append(i)
    return E[keep], e[keep]


def _is_bounded(A: np.ndarray, E: np.ndarray) -> bool:
    """True iff the recession cone ``{d : A d >= 0, E d = 0}`` is trivial."""
    n = A.shape[1] if A.size else E.shape[1]
    box = [(row, -1.0) for row in np.eye(n)] + [(-row, -1.0) for row in np.eye(n)]
    ge = [(row, 0.0) for row in A] + box
    eq = [(row, 0.0) for row in E]
    for i in range(n):
        for sign in (1.0, -1.0):
            obj = np.zeros(n)
            obj[i] = -sign
            res = solve(LinearProgram(obj, ge, eq))
            if res.optimal and -res.value > VERTEX_TOL:
                return False
    return True


def enumerate_vertices(ge_constraints=(), eq_constraints=(), simplex_constraint: bool = False, n: int | None = None):
    """All extreme points of ``{x : ge rows >=, eq rows ==}`` by basis enumeration.

    Returns a list of 1-D arrays; empty iff the polytope is empty.
    """
    ge_constraints = list(ge_constraints)
    eq_constraints = list(eq_constraints)
    if n is None:
        first = (ge_constraints or eq_constraints or [None])[0]
        if first is None:
            raise MalformedProgram("dimension unknown: pass n or at least one constraint")
        n = len(first[0])
    A, b = _as_rows(ge_constraints, n, "ge")
    E, e = _as_rows(eq_constraints, n, "eq")
    if simplex_constraint:
        A = np.vstack([A, np.eye(n)])
        b = np.concatenate([b, np.zeros(n)])
        E = np.vstack([E, np.ones((1, n))])
        e = np.concatenate([e, [1.0]])
    if n > MAX_VERTEX_DIM:
        raise VertexBudgetExceeded(f"vertex enumeration limited to dimension {MAX_VERTEX_DIM}, got {n}")

    feas = solve(LinearProgram(np.zeros(n), list(zip(A, b)), list(zip(E, e))))
    if not feas.optimal:
        return []
    if not simplex_constraint and not _is_bounded(A, E):
        raise UnboundedRegion("the constraint set has recession directions")

    E, e = _independent_rows(E, e)
    k = E.shape[0]
    need = n - k
    m = A.shape[0]
    if need < 0 or need > m:
        # over-determined equalities: the feasible point is unique
        return [feas.solution]
    if math.comb(m, need) > MAX_BASES:
        raise VertexBudgetExceeded(f"{math.comb(m, need)} candidate bases exceed the budget of {MAX_BASES}")

    combos = np.array(list(combinations(range(m), need)), dtype=int).reshape(-1, need)
    M = np.empty((combos.shape[0], n, n))
    rhs = np.empty((combos.shape[0], n))
    M[:, :k, :] = E
    rhs[:, :k] = e
    M[:, k:, :] = A[combos]
    rhs[:, k:] = b[combos]
    sv = np.linalg.svd(M, compute_uv=False)
    ok = sv[:, -1] > 1e-10 * np.maximum(sv[:, 0], 1.0)
    if not np.any(ok):
        return []
    X = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    scale = 1.0 + np.max(np.abs(b), initial=0.0)
    slack = X @ A.T - b if m else np.zeros((X.shape[0], 0))
    good = np.all(slack >= -VERTEX_TOL * scale, axis=1)
    if k:
        good &= np.all(np.abs(X @ E.T - e) <= VERTEX_TOL * scale, axis=1)
    verts: list[np.ndarray] = []
    for x in X[good]:
        if simplex_constraint:
            x = np.where(np.abs(x) < 1e-14, 0.0, x)
        if not any(np.max(np.abs(x - v)) <= VERTEX_TOL for v in verts):
            verts.append(x)
    return verts
