"""Jensen-type bounds for imprecise previsions.

All bounds here need only 2-coherence of the lower/upper pair, except
:func:`jensen_precise`, which is the dF-coherent special case.  Each
inequality comes back as a :class:`JensenReport`; inapplicable
conditional branches are reported too, with ``applicable=False`` and no
bound, so callers can see why a branch did not fire.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .consistency import natural_extension
from .core import Assessment, Gamble, apply_function, hole_bracket
from .errors import (
    BadExponents,
    BoundaryPoint,
    ConjugacyViolation,
    DomainMismatch,
    InputError,
    NegativeMoment,
    OutOfRange,
)
from . import functions as fns
from .functions import FunctionSpec

EQ_TOL = 1e-12
TWO_COHERENCE = "2-coherence"
DF_COHERENCE = "dF-coherence"


@dataclass(frozen=True)
class JensenReport:
    target: str
    bound: float | None
    direction: str
    fired: str
    assumptions_checked: tuple[str, ...] = ()
    applicable: bool = True
    side: str = "lower"  # which prevision the bound is about: lower | upper | mu | conj | precise
    consistency_required: str = TWO_COHERENCE
    tightest: bool = False
    gamble: Gamble | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.applicable and self.bound is not None:
            raise ValueError("an inapplicable report carries no bound")


@dataclass(frozen=True)
class ImprovedJensenReport:
    """Chord bounds at ``lpr(X)`` (``m1``) and at ``upr(X)`` (``m2``).

    For concave ``f``: ``lpr(f(X)) <= m1``, ``upr(f(X)) <= m2`` and
    ``lpr(f(X)) <= combined``.  For convex ``f``: ``lpr(f(X)) >= m1``,
    ``upr(f(X)) >= m2`` and ``upr(f(X)) >= combined``.
    """

    m1: float | None
    m2: float | None
    combined: float
    side: str
    shape: str
    reasons: dict[str, str]
    gamble: Gamble | None = field(default=None, repr=False, compare=False)

    def reports(self) -> list[JensenReport]:
        le = self.shape == "concave"
        d = "<=" if le else ">="
        out = []
        if self.m1 is not None:
            out.append(JensenReport("lpr(f(X))", self.m1, d, "chord-at-lower", side="lower", gamble=self.gamble))
        if self.m2 is not None:
            out.append(JensenReport("upr(f(X))", self.m2, d, "chord-at-upper", side="upper", gamble=self.gamble))
        side = "lower" if le else "upper"
        out.append(
            JensenReport(f"{'lpr' if le else 'upr'}(f(X))", self.combined, d, "chord-combined", side=side, gamble=self.gamble)
        )
        return out


def _require_interior(f: FunctionSpec, x: float, what: str) -> None:
    if not f.is_interior(x):
        raise BoundaryPoint(f"{what}={x!r} is not an interior point of the domain {f.domain} of {f.name}")


def _mark_tightest(reports: list[JensenReport]) -> list[JensenReport]:
    best: dict[tuple[str, str], float] = {}
    for r in reports:
        if r.bound is None:
            continue
        key = (r.side, r.direction)
        cur = best.get(key)
        if cur is None or (r.bound > cur if r.direction == ">=" else r.bound < cur):
            best[key] = r.bound
    out = []
    for r in reports:
        hit = r.bound is not None and best.get((r.side, r.direction)) == r.bound
        out.append(replace(r, tightest=hit))
    return out


def _fx(f: FunctionSpec, x: Gamble | None) -> Gamble | None:
    return None if x is None else apply_function(x, f)


def jensen_base(mu: float, conj: float, f: FunctionSpec, at: float | None = None) -> list[JensenReport]:
    """Support-line bounds for a measure obeying monotonicity, translation
    invariance and positive homogeneity, evaluated at ``at = mu``.

    ``conj`` is the value of the conjugate measure; it only enters the
    report's labels.
    """
    if at is None:
        at = mu
    if at != mu:
        raise InputError("the evaluation point must equal the measure's value")
    _require_interior(f, at, "mu")
    fa = f(at)
    notes = (f"conjugate value {conj!r}",)
    out = []
    if f.convex:
        if f.dplus(at) >= 0:
            out.append(JensenReport("mu(f(X|B))", fa, ">=", "support-line-mu", notes, side="mu"))
        if f.dminus(at) <= 0:
            out.append(JensenReport("conj(f(X|B))", fa, ">=", "support-line-conj", notes, side="conj"))
    else:
        if f.dminus(at) >= 0:
            out.append(JensenReport("mu(f(X|B))", fa, "<=", "support-line-mu", notes, side="mu"))
        if f.dplus(at) <= 0:
            out.append(JensenReport("conj(f(X|B))", fa, "<=", "support-line-conj", notes, side="conj"))
    return out


def jensen_bounds(lprX: float, uprX: float, f: FunctionSpec, x: Gamble | None = None) -> list[JensenReport]:
    """Unconditional bounds on ``lpr(f(X))`` and ``upr(f(X))`` from ``lpr(X)``, ``upr(X)``.

    Pass the gamble ``x`` to attach ``f(x)`` to every report for later
    certification.
    """
    if lprX > uprX + EQ_TOL:
        raise ConjugacyViolation(f"lpr(X)={lprX!r} exceeds upr(X)={uprX!r}")
    _require_interior(f, lprX, "lpr(X)")
    _require_interior(f, uprX, "upr(X)")
    fl, fu = f(lprX), f(uprX)
    g = _fx(f, x)
    base = (f"lpr(X)={lprX!r}", f"upr(X)={uprX!r}", f"{f.shape} {f.name}")
    if f.approximate:
        base += ("derivatives approximated by finite differences",)
    out: list[JensenReport] = []
    if not f.convex:
        out.append(JensenReport("lpr(f(X))", min(fl, fu), "<=", "concave-lower-min", base, side="lower", gamble=g))
        ok = f.dminus(uprX) >= 0
        out.append(
            JensenReport("upr(f(X))", fu if ok else None, "<=", "concave-upper-at-upper",
                         base + ("left derivative at upr(X) >= 0",), ok, side="upper", gamble=g)
        )
        ok = f.dplus(lprX) <= 0
        out.append(
            JensenReport("upr(f(X))", fl if ok else None, "<=", "concave-upper-at-lower",
                         base + ("right derivative at lpr(X) <= 0",), ok, side="upper", gamble=g)
        )
    else:
        out.append(JensenReport("upr(f(X))", max(fl, fu), ">=", "convex-upper-max", base, side="upper", gamble=g))
        ok = f.dplus(lprX) >= 0
        out.append(
            JensenReport("lpr(f(X))", fl if ok else None, ">=", "convex-lower-at-lower",
                         base + ("right derivative at lpr(X) >= 0",), ok, side="lower", gamble=g)
        )
        ok = f.dminus(uprX) <= 0
        out.append(
            JensenReport("lpr(f(X))", fu if ok else None, ">=", "convex-lower-at-upper",
                         base + ("left derivative at upr(X) <= 0",), ok, side="lower", gamble=g)
        )
    return _mark_tightest(out)


def jensen_precise(pX: float, f: FunctionSpec, x: Gamble | None = None) -> JensenReport:
    _require_interior(f, pX, "P(X)")
    notes = ("P is assumed dF-coherent on a domain containing X and f(X); not verified",)
    return JensenReport(
        "P(f(X))", f(pX), ">=" if f.convex else "<=", f"precise-{f.shape}", notes,
        side="precise", consistency_required=DF_COHERENCE, tightest=True, gamble=_fx(f, x),
    )


def _chord(f: FunctionSpec, k: float, lo: float, hi: float) -> float:
    w = (k - lo) / (hi - lo)
    return f(hi) * w + f(lo) * (1.0 - w)


def improved_jensen(g: Gamble, lprX: float, uprX: float, f: FunctionSpec) -> ImprovedJensenReport:
    """Chord bounds exploiting gaps in the image set of ``g``."""
    lo, hi = g.inf, g.sup
    for label, v in (("lpr(X)", lprX), ("upr(X)", uprX)):
        if not (lo - EQ_TOL <= v <= hi + EQ_TOL):
            raise OutOfRange(f"{label}={v!r} lies outside [{lo!r}, {hi!r}]")
    if lprX > uprX + EQ_TOL:
        raise ConjugacyViolation(f"lpr(X)={lprX!r} exceeds upr(X)={uprX!r}")
    if not (f.in_domain(lo) and f.in_domain(hi)):
        raise DomainMismatch(f"{f.name} is not defined on [{lo!r}, {hi!r}]")
    lprX = min(max(lprX, lo), hi)
    uprX = min(max(uprX, lo), hi)
    xb = hole_bracket(g, lprX)
    zb = hole_bracket(g, uprX)
    reasons: dict[str, str] = {}
    m1 = m2 = None
    if f.convex:
        if not xb.strict:
            reasons["m1"] = "lpr(X) is in the image set: no chord improvement"
        elif f(xb.lower) > f(xb.upper) + EQ_TOL:
            reasons["m1"] = "f decreases across the gap at lpr(X): chord bound unavailable"
        else:
            m1 = _chord(f, lprX, xb.lower, xb.upper)
            reasons["m1"] = f"gap ({xb.lower!r}, {xb.upper!r}) around lpr(X)"
        if not zb.strict:
            reasons["m2"] = "upr(X) is in the image set: no chord improvement"
        else:
            m2 = _chord(f, uprX, zb.lower, zb.upper)
            reasons["m2"] = f"gap ({zb.lower!r}, {zb.upper!r}) around upr(X)"
        combined = max(f(lprX) if m1 is None else m1, f(uprX) if m2 is None else m2)
        side = "upper"
    else:
        if not xb.strict:
            reasons["m1"] = "lpr(X) is in the image set: no chord improvement"
        else:
            m1 = _chord(f, lprX, xb.lower, xb.upper)
            reasons["m1"] = f"gap ({xb.lower!r}, {xb.upper!r}) around lpr(X)"
        if not zb.strict:
            reasons["m2"] = "upr(X) is in the image set: no chord improvement"
        elif f(zb.lower) > f(zb.upper) + EQ_TOL:
            reasons["m2"] = "f decreases across the gap at upr(X): chord bound unavailable"
        else:
            m2 = _chord(f, uprX, zb.lower, zb.upper)
            reasons["m2"] = f"gap ({zb.lower!r}, {zb.upper!r}) around upr(X)"
        combined = min(f(lprX) if m1 is None else m1, f(uprX) if m2 is None else m2)
        side = "lower"
    return ImprovedJensenReport(m1, m2, combined, side, f.shape, reasons, gamble=apply_function(g, f))


def lyapunov(
    s: float,
    t: float,
    upr_abs_s: float | None = None,
    lpr_s: float | None = None,
    nonneg: bool = False,
) -> list[JensenReport]:
    """Moment bounds of order ``t`` from moments of order ``s < t``."""
    if not 0 < s < t:
        raise BadExponents(f"need 0 < s < t, got s={s!r}, t={t!r}")
    for label, v in (("upr(|X|^s)", upr_abs_s), ("lpr(X^s)", lpr_s)):
        if v is not None and v < 0:
            raise NegativeMoment(f"{label}={v!r} is negative")
    r = t / s
    notes: list[str] = [f"s={s!r}", f"t={t!r}"]
    if nonneg and upr_abs_s is not None and lpr_s is not None:
        ok = lpr_s ** (1 / s) <= upr_abs_s ** (1 / s) + EQ_TOL
        notes.append("lower/upper moment chain " + ("holds" if ok else "VIOLATED: inputs are not 2-coherent"))
    out = []
    if upr_abs_s is not None:
        out.append(JensenReport("upr(|X|^t)", upr_abs_s**r, ">=", "lyapunov-upper", tuple(notes), side="upper"))
    if lpr_s is not None:
        if nonneg:
            out.append(JensenReport("lpr(X^t)", lpr_s**r, ">=", "lyapunov-lower", tuple(notes), side="lower"))
        else:
            out.append(JensenReport("lpr(X^t)", None, ">=", "lyapunov-lower",
                                    tuple(notes) + ("X >= 0 not asserted",), False, side="lower"))
    return out


def variance_property_check(lprX: float, lprX2: float, uprX: float, uprX2: float, nonneg: bool = True) -> tuple[bool, bool]:
    """``lpr(X)^2 <= lpr(X^2)`` and ``upr(X)^2 <= upr(X^2)`` for ``X >= 0``."""
    if not nonneg:
        raise InputError("the squared-moment check needs X >= 0")
    return lprX**2 <= lprX2 + EQ_TOL, uprX**2 <= uprX2 + EQ_TOL


@dataclass(frozen=True)
class MomentInference:
    power: int
    lprX: float
    uprX: float
    jensen: list[JensenReport]
    improved: ImprovedJensenReport | None
    exact_lower: float
    exact_upper: float

    @property
    def jensen_lower(self) -> float | None:
        """Best plain Jensen lower bound on ``lpr(X^k)``, if any fired."""
        vals = [r.bound for r in self.jensen if r.side == "lower" and r.direction == ">=" and r.bound is not None]
        return max(vals) if vals else None

    @property
    def improved_lower(self) -> float | None:
        if self.improved is None or self.improved.m1 is None:
            return self.jensen_lower
        best = self.jensen_lower
        return self.improved.m1 if best is None else max(best, self.improved.m1)


def moment_inference(a: Assessment, x_name: str, power: int) -> MomentInference:
    """Jensen bounds for ``X**power`` next to its exact natural extension."""
    if int(power) != power or power < 2:
        raise InputError("power must be an integer >= 2")
    k = int(power)
    g = a.gamble(x_name)
    if k % 2 == 1 and not g.is_nonnegative():
        raise DomainMismatch("odd moments need X >= 0 for convexity")
    f = fns.power(k)
    lprX = natural_extension(a, g)
    uprX = -natural_extension(a, -g)
    try:
        reports = jensen_bounds(lprX, uprX, f, x=g)
    except BoundaryPoint:
        reports = []
    improved = improved_jensen(g, lprX, uprX, f)
    gk = apply_function(g, f)
    return MomentInference(k, lprX, uprX, reports, improved, natural_extension(a, gk), -natural_extension(a, -gk))
