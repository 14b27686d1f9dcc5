"""Reference computations that share no code with the package.

These back the derived expectations in the test suite: envelopes come
from scipy's HiGHS solver, vertices from brute-force subset solves.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog


def credal_rows(entries):
    """``(A_ub, b_ub)`` for ``E_p(X_j) >= l_j`` written as ``-X_j . p <= -l_j``."""
    if not entries:
        return None, None
    A = np.array([-np.asarray(g, dtype=float) for g, _ in entries])
    b = np.array([-float(l) for _, l in entries])
    return A, b


def envelope(entries, y, n, sense="min", eq=()):
    """Exact ``min``/``max`` of ``E_p(y)`` over the credal set, or ``None`` if empty."""
    y = np.asarray(y, dtype=float)
    A, b = credal_rows(entries)
    A_eq = [np.ones(n)] + [np.asarray(g, dtype=float) for g, _ in eq]
    b_eq = [1.0] + [float(v) for _, v in eq]
    c = y if sense == "min" else -y
    res = linprog(c, A_ub=A, b_ub=b, A_eq=np.array(A_eq), b_eq=np.array(b_eq),
                  bounds=[(0, None)] * n, method="highs")
    if res.status == 2:
        return None
    assert res.status == 0, res.message
    return float(y @ res.x)


def brute_vertices(entries, n, tol=1e-9):
    """All vertices of ``{p in simplex : X_j . p >= l_j}`` by solving every tight subset."""
    rows = [(np.asarray(g, dtype=float), float(l)) for g, l in entries]
    rows += [(np.eye(n)[i], 0.0) for i in range(n)]
    out = []
    for combo in itertools.combinations(range(len(rows)), n - 1):
        M = np.vstack([np.ones(n)] + [rows[i][0] for i in combo])
        rhs = np.array([1.0] + [rows[i][1] for i in combo])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        p = np.linalg.solve(M, rhs)
        if all(g @ p >= l - tol for g, l in rows):
            if not any(np.allclose(p, q, atol=1e-8) for q in out):
                out.append(p)
    return out


def variance(p, x):
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    m = p @ x
    return float(p @ (x - m) ** 2)


def grid_argmin(fn, lo, hi, levels=4, points=201):
    """Min of a unimodal ``fn`` by successively refined uniform grids."""
    best_c, best = lo, fn(lo)
    a, b = lo, hi
    for _ in range(levels):
        cs = np.linspace(a, b, points)
        vals = [fn(c) for c in cs]
        i = int(np.argmin(vals))
        if vals[i] < best:
            best_c, best = float(cs[i]), vals[i]
        step = (b - a) / (points - 1)
        a, b = max(lo, cs[i] - step), min(hi, cs[i] + step)
    return best_c, best
