"""Ground truth for bound certification and property tests.

Exact lower/upper envelopes come straight from the credal-set LP.  A
bound on ``lpr(Y)`` is certified against the lower envelope of ``Y``, a
bound on ``upr(Y)`` against the upper envelope: both are the values the
natural extension assigns, and the natural extension is coherent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .consistency import CredalPolytope, credal_optimize
from .core import Assessment, Entry, Gamble, Partition, conjugate_entry
from .errors import EmptyCredalSet, InputError
from .tailbounds import _variance

CERT_TOL = 1e-7


@dataclass(frozen=True)
class EnvelopePair:
    lower: float
    upper: float
    gamble_description: str = ""


@dataclass(frozen=True)
class Certificate:
    report: object
    exact: float
    slack: float
    valid: bool


def exact_envelope(a: Assessment, y: Gamble, description: str = "") -> EnvelopePair:
    poly = CredalPolytope(a)
    return EnvelopePair(credal_optimize(poly, y, "min"), credal_optimize(poly, y, "max"), description)


def certify(a: Assessment, report, gamble: Gamble | None = None, side: str | None = None) -> Certificate:
    """Check a Jensen or tail-bound report against the exact envelope of its target."""
    target = gamble if gamble is not None else getattr(report, "gamble", None)
    if target is None:
        raise InputError("the report carries no target gamble; pass one explicitly")
    side = side or report.side
    bound = report.bound
    if bound is None:
        raise InputError("cannot certify an inapplicable report")
    poly = CredalPolytope(a)
    if side == "lower":
        exact = credal_optimize(poly, target, "min")
    elif side == "upper":
        exact = credal_optimize(poly, target, "max")
    elif side == "precise":
        # a precise bound must hold for every dominating prevision
        exact = credal_optimize(poly, target, "max" if report.direction == "<=" else "min")
    else:
        raise InputError(f"cannot certify a report about {side!r}; pass side='lower' or 'upper'")
    slack = bound - exact if report.direction == "<=" else exact - bound
    return Certificate(report, exact, slack, slack >= -CERT_TOL)


def sample_credal(a: Assessment, count: int, seed: int) -> list[np.ndarray]:
    """Random convex combinations of credal vertices (flat Dirichlet weights)."""
    if count < 0:
        raise InputError("count must be non-negative")
    verts = CredalPolytope(a).vertices()
    if not verts:
        raise EmptyCredalSet("the credal set is empty")
    if count == 0:
        return []
    V = np.array(verts)
    rng = np.random.default_rng(seed)
    W = rng.dirichlet(np.ones(len(verts)), size=count)
    return list(W @ V)


def brute_variance(a: Assessment, x_name: str, samples: int, seed: int) -> tuple[float, float]:
    """Min and max of ``V_p(X)`` over credal vertices plus random credal points."""
    x = a.gamble(x_name).values
    pts = CredalPolytope(a).vertices()
    if not pts:
        raise EmptyCredalSet("the credal set is empty")
    pts = pts + sample_credal(a, samples, seed)
    vs = [_variance(p, x) for p in pts]
    return min(vs), max(vs)


# --- random instances for property suites ---------------------------------


def random_gamble(rng: np.random.Generator, partition: Partition, nonneg: bool = False,
                  decimals: int | None = 2) -> Gamble:
    lo = 0.0 if nonneg else -5.0
    vals = rng.uniform(lo, 5.0, partition.n)
    if decimals is not None:
        vals = np.round(vals, decimals)
    return Gamble(partition, vals)


def random_coherent_assessment(rng: np.random.Generator, n: int | None = None, gambles: int | None = None,
                               nonneg: bool = False, with_uppers: bool = True) -> Assessment:
    """Lower envelope of a few random probability vectors: coherent by construction.

    The first gamble is always named ``X``.
    """
    n = int(rng.integers(3, 7)) if n is None else n
    gambles = int(rng.integers(1, 4)) if gambles is None else gambles
    part = Partition.of_size(n)
    k = int(rng.integers(1, 5))
    P = rng.dirichlet(np.full(n, 0.7), size=k)
    entries: list[Entry] = []
    for j in range(gambles):
        name = "X" if j == 0 else f"Y{j}"
        g = random_gamble(rng, part, nonneg)
        ev = P @ g.values
        entries.append(Entry(name, g, float(ev.min())))
        if with_uppers and rng.random() < 0.5:
            entries.append(conjugate_entry(name, g, float(ev.max())))
    return Assessment(part, entries)


def random_assessment(rng: np.random.Generator, n: int | None = None, gambles: int | None = None) -> Assessment:
    """Mixed consistent/inconsistent assessments: envelope values plus noise."""
    n = int(rng.integers(2, 6)) if n is None else n
    gambles = int(rng.integers(1, 5)) if gambles is None else gambles
    part = Partition.of_size(n)
    P = rng.dirichlet(np.ones(n), size=int(rng.integers(1, 4)))
    entries = []
    for j in range(gambles):
        g = random_gamble(rng, part, decimals=1)
        lo = float((P @ g.values).min())
        mode = rng.integers(0, 4)
        if mode == 0:
            lower = lo
        elif mode == 1:
            lower = lo + float(rng.normal(0.0, 0.5))
        elif mode == 2:
            lower = float(rng.uniform(g.inf - 1.0, g.sup + 1.0))
        else:
            lower = round(float(rng.uniform(g.inf, g.sup)), 1)
        entries.append(Entry(f"G{j}", g, lower))
    return Assessment(part, entries)
