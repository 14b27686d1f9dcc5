"""Markov, Cantelli and Chebyshev-like tail bounds for imprecise previsions.

Every bound is a :class:`TailBoundReport` clamped to ``[0, 1]``.  The
report records the weakest consistency level under which the inequality
holds (``consistency_required``), so a bound that needs coherence is
never silently applied to a merely 2-coherent assessment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .consistency import (
    CredalPolytope,
    SublinearSum,
    check_coherence,
    credal_optimize,
    natural_extension,
    upper_extension,
)
from .core import Assessment, Event, Gamble
from .errors import (
    EmptyConstrainedCredalSet,
    EmptyCredalSet,
    InputError,
    NegativityFlagMissing,
    NonPositiveEpsilon,
    NonPositiveThreshold,
    ZeroLowerPrevision,
)

GSS_TOL = 1e-9
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

ASL_WITH_MEAN = "ASL"
TWO_COHERENCE = "2-coherence"
COHERENCE = "coherence"
DF_COHERENCE = "dF-coherence"


@dataclass(frozen=True)
class TailBoundReport:
    event_description: str
    bound: float
    direction: str
    inequality_id: str
    consistency_required: str
    assumptions_checked: tuple[str, ...] = ()
    vacuous: bool = False
    side: str = "lower"  # lower | upper | precise: which probability the bound is about
    threshold: float | None = None
    event: Event | None = field(default=None, repr=False, compare=False)

    @property
    def gamble(self) -> Gamble | None:
        return None if self.event is None else self.event.indicator


def _report(desc, raw, direction, ident, requires, notes=(), side="lower", threshold=None, event=None):
    if direction == "<=":
        vacuous = raw >= 1.0
    else:
        vacuous = raw <= 0.0
    bound = min(1.0, max(0.0, raw))
    return TailBoundReport(desc, bound, direction, ident, requires, tuple(notes), vacuous, side, threshold, event)


def _positive(value: float, exc, what: str) -> None:
    if not value > 0:
        raise exc(f"{what} must be > 0, got {value!r}")


def _markov(prev, a, nonneg, gamble, side, ident, requires):
    _positive(a, NonPositiveThreshold, "threshold a")
    if not nonneg:
        raise NegativityFlagMissing("Markov bounds need X >= 0 asserted")
    if isinstance(prev, SublinearSum):
        requires = prev.consistency_required
        prev = prev.value
    if prev < 0:
        raise InputError(f"a prevision of a nonnegative gamble cannot be negative, got {prev!r}")
    event = None
    if gamble is not None:
        if not gamble.is_nonnegative():
            raise NegativityFlagMissing("the attached gamble takes negative values")
        event = gamble.ge(a)
    name = "lpr" if side == "lower" else "upr"
    return _report(f"{name}(X >= {a!r})", prev / a, "<=", ident, requires,
                   (f"{name}(X)={prev!r}", "X >= 0"), side, a, event)


def markov_lower(lprX: float, a: float, nonneg: bool = True, gamble: Gamble | None = None) -> TailBoundReport:
    """``lpr(X >= a) <= lpr(X) / a`` for ``X >= 0``."""
    return _markov(lprX, a, nonneg, gamble, "lower", "markov-lower", TWO_COHERENCE)


def markov_upper(uprX, a: float, nonneg: bool = True, gamble: Gamble | None = None,
                 requires: str = TWO_COHERENCE) -> TailBoundReport:
    """``upr(X >= a) <= upr(X) / a`` for ``X >= 0``.

    Passing a :class:`SublinearSum` as ``uprX`` escalates the consistency
    requirement to coherence.
    """
    return _markov(uprX, a, nonneg, gamble, "upper", "markov-upper", requires)


def cantelli_precise(pX2: float, eps: float, pX_zero: bool = True,
                     gamble: Gamble | None = None) -> tuple[TailBoundReport, TailBoundReport]:
    """Both one-sided bounds ``P(X <= -eps)``, ``P(X >= eps) <= P(X^2)/(P(X^2)+eps^2)``."""
    _positive(eps, NonPositiveEpsilon, "eps")
    if not pX_zero:
        raise InputError("the precise Cantelli bound needs P(X) = 0")
    if pX2 < 0:
        raise InputError("P(X^2) cannot be negative")
    raw = pX2 / (pX2 + eps * eps)
    notes = ("P(X)=0", f"P(X^2)={pX2!r}")
    lo_ev = None if gamble is None else gamble.le(-eps)
    hi_ev = None if gamble is None else gamble.ge(eps)
    return (
        _report(f"P(X <= {-eps!r})", raw, "<=", "cantelli-precise", DF_COHERENCE, notes, "precise", -eps, lo_ev),
        _report(f"P(X >= {eps!r})", raw, "<=", "cantelli-precise", DF_COHERENCE, notes, "precise", eps, hi_ev),
    )


def cantelli_imprecise(a: Assessment, x_name: str, c: float, eps: float | None = None,
                       side: str = "below", sigmas: float | None = None) -> TailBoundReport:
    """Cantelli bound around a centre ``c`` that some dominating prevision attains.

    Give either ``eps`` or ``sigmas``; the latter sets
    ``eps = sigmas * sqrt(upr((X - c)^2))`` and the bound is then exactly
    ``1 / (1 + sigmas^2)``.
    """
    if side not in ("below", "above"):
        raise InputError("side must be 'below' or 'above'")
    if (eps is None) == (sigmas is None):
        raise InputError("give exactly one of eps and sigmas")
    g = a.gamble(x_name)
    poly = CredalPolytope(a).with_mean(g, c)
    if poly.is_empty():
        raise EmptyConstrainedCredalSet(
            f"no dominating prevision has P({x_name}) = {c!r}"
            + (" (c lies outside the range of X)" if not g.inf <= c <= g.sup else "")
        )
    u = upper_extension(a, (g - c) ** 2)
    u = max(u, 0.0)
    if sigmas is not None:
        _positive(sigmas, NonPositiveEpsilon, "sigmas")
        eps = sigmas * math.sqrt(u)
        _positive(eps, NonPositiveEpsilon, "eps (degenerate deviation)")
        raw = 1.0 / (1.0 + sigmas * sigmas)
    else:
        _positive(eps, NonPositiveEpsilon, "eps")
        raw = u / (u + eps * eps)
    t = c - eps if side == "below" else c + eps
    rel = "<=" if side == "below" else ">="
    event = g.le(t) if side == "below" else g.ge(t)
    notes = (f"c={c!r}", f"upr((X-c)^2)={u!r}", f"eps={eps!r}", "credal set with P(X)=c is non-empty")
    return _report(f"lpr({x_name} {rel} {t!r})", raw, "<=", "cantelli-asl", ASL_WITH_MEAN, notes, "lower", t, event)


@dataclass(frozen=True)
class VarianceReport:
    lower_variance: float
    upper_variance: float
    argmin_c_lower: float
    argmin_c_upper: float
    witness_p1: np.ndarray = field(repr=False)
    method_notes: str = ""
    coherent: bool | None = None


def _variance(p: np.ndarray, x: np.ndarray) -> float:
    m = float(p @ x)
    return float(p @ (x * x)) - m * m


def golden_section(f, lo: float, hi: float, tol: float = GSS_TOL) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(argmin, min)``."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
    mid = 0.5 * (a + b)
    best = min(best, (f(mid), mid), (f(lo), lo), (f(hi), hi))
    return best[1], best[0]


def variances(a: Assessment, x_name: str) -> VarianceReport:
    """Lower and upper variance of ``X`` over the credal set of ``a``.

    The lower variance is the smallest ``V_p(X)`` over the vertices of the
    credal set (``V_p`` is concave in ``p``).  The upper variance is
    ``min_c max_p E_p((X - c)^2)``: one LP per probe, golden-section in ``c``.
    """
    g = a.gamble(x_name)
    x = g.values
    poly = CredalPolytope(a)
    verts = poly.vertices()
    if not verts:
        raise EmptyCredalSet("the credal set is empty")
    vs = [_variance(v, x) for v in verts]
    i = int(np.argmin(vs))
    p1 = verts[i]
    lvx = max(vs[i], 0.0)

    def h(c):
        return credal_optimize(poly, (g - c) ** 2, "max")

    if g.sup - g.inf <= 0:
        c2, uvx = g.inf, 0.0
    else:
        c2, uvx = golden_section(h, g.inf, g.sup)
    uvx = max(uvx, lvx)
    coh = check_coherence(a).passed
    notes = f"{len(verts)} credal vertices; " + ("assessment is coherent" if coh else "assessment is NOT coherent")
    return VarianceReport(lvx, uvx, float(p1 @ x), c2, p1, notes, coh)


def cantelli_coherent(a: Assessment, x_name: str, eps: float,
                      vr: VarianceReport | None = None) -> list[TailBoundReport]:
    """The four lower/upper-variance Cantelli bounds under coherence.

    Order: below ``upr(X)-eps`` (upper variance), below ``lpr(X)-eps``
    (lower variance), above ``lpr(X)+eps`` (upper variance), above
    ``upr(X)+eps`` (lower variance).
    """
    _positive(eps, NonPositiveEpsilon, "eps")
    g = a.gamble(x_name)
    lprX = natural_extension(a, g)
    uprX = -natural_extension(a, -g)
    if vr is None:
        vr = variances(a, x_name)
    lv, uv = vr.lower_variance, vr.upper_variance
    e2 = eps * eps
    coh = "coherence verified" if vr.coherent else "coherence NOT verified"
    notes = (f"lpr(X)={lprX!r}", f"upr(X)={uprX!r}", f"lower variance={lv!r}", f"upper variance={uv!r}", coh)
    specs = [
        ("<=", uprX - eps, uv, "cantelli-coh-uv"),
        ("<=", lprX - eps, lv, "cantelli-coh-lv"),
        (">=", lprX + eps, uv, "cantelli-coh-uv"),
        (">=", uprX + eps, lv, "cantelli-coh-lv"),
    ]
    out = []
    for rel, t, v, ident in specs:
        event = g.le(t) if rel == "<=" else g.ge(t)
        out.append(_report(f"lpr({x_name} {rel} {t!r})", v / (v + e2), "<=", ident, COHERENCE, notes, "lower", t, event))
    return out


@dataclass(frozen=True)
class ComparisonReport:
    delta: float
    eps2: float
    eps1: float
    preferred_for_eps: str
    preferred: str
    markov_bound: float
    cantelli_bound: float
    markov_sufficient: bool


def compare_markov_cantelli(lprX: float, uprX: float, lvx: float, eps: float, nonneg: bool = True) -> ComparisonReport:
    """Lower Markov at ``a = upr(X)+eps`` against the lower-variance Cantelli bound."""
    if not nonneg:
        raise NegativityFlagMissing("the comparison needs X >= 0")
    if lprX <= 0:
        raise ZeroLowerPrevision("lpr(X) must be positive for the comparison")
    _positive(eps, NonPositiveEpsilon, "eps")
    if lprX > uprX:
        raise InputError("lpr(X) exceeds upr(X)")
    if lvx < 0:
        raise InputError("lower variance cannot be negative")
    delta = lvx * (lvx + 4.0 * lprX * (uprX - lprX))
    root = math.sqrt(delta)
    eps2 = (lvx + root) / (2.0 * lprX)
    eps1 = (lvx - root) / (2.0 * lprX)
    markov = lprX / (uprX + eps)
    cantelli = lvx / (lvx + eps * eps)
    if eps > eps2:
        preferred = "cantelli"
    elif eps == eps2:
        preferred = "tie"
    else:
        preferred = "markov"
    rule = f"Cantelli is stricter iff eps > {eps2!r}"
    return ComparisonReport(delta, eps2, eps1, rule, preferred, markov, cantelli, eps * lprX < lvx)


def conjugate_cantelli(lvx: float, eps: float, lprX: float | None = None,
                       gamble: Gamble | None = None) -> TailBoundReport:
    """``upr(X >= lpr(X) - eps) >= eps^2 / (lvx + eps^2)``."""
    _positive(eps, NonPositiveEpsilon, "eps")
    if lvx < 0:
        raise InputError("lower variance cannot be negative")
    t = None if lprX is None else lprX - eps
    event = None if gamble is None or t is None else gamble.ge(t)
    desc = "upr(X >= lpr(X) - eps)" if t is None else f"upr(X >= {t!r})"
    return _report(desc, eps * eps / (lvx + eps * eps), ">=", "cantelli-conjugate", COHERENCE,
                   (f"lower variance={lvx!r}", f"eps={eps!r}"), "upper", t, event)


def chebyshev_like(dev2_upper: float, b: float, center_kind: str = "lower", center: float | None = None,
                   gamble: Gamble | None = None) -> TailBoundReport:
    """``upr(|X - centre| >= b) <= upr((X - centre)^2) / b^2``."""
    _positive(b, NonPositiveThreshold, "b")
    if center_kind not in ("lower", "upper"):
        raise InputError("center_kind must be 'lower' or 'upper'")
    if dev2_upper < 0:
        raise InputError("upper squared deviation cannot be negative")
    event = None
    if gamble is not None and center is not None:
        event = Event(gamble.partition, np.flatnonzero(np.abs(gamble.values - center) >= b))
    label = "lpr(X)" if center_kind == "lower" else "upr(X)"
    return _report(f"upr(|X - {label}| >= {b!r})", dev2_upper / (b * b), "<=", "chebyshev-like", TWO_COHERENCE,
                   (f"centre {label}" + ("" if center is None else f"={center!r}"), f"upr((X-c)^2)={dev2_upper!r}"),
                   "upper", b, event)


def deviation_upper(a: Assessment, x_name: str, center: float) -> float:
    """Exact ``upr((X - center)^2)`` by natural extension."""
    g = a.gamble(x_name)
    return upper_extension(a, (g - center) ** 2)


def cauchy_like_check(p, g: Gamble, tol: float = 1e-10) -> bool:
    """``E_p(I_A g)^2 <= E_p(I_A) E_p(I_A g^2)`` with ``A = (g > 0)``."""
    p = np.asarray(p, dtype=float)
    x = g.values
    ind = (x > 0).astype(float)
    lhs = float(p @ (ind * x)) ** 2
    rhs = float(p @ ind) * float(p @ (ind * x * x))
    return lhs <= rhs + tol * max(1.0, rhs)
