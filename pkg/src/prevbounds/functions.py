"""Convex and concave scalar functions with one-sided derivatives.

A :class:`FunctionSpec` bundles a function, its shape, its closed domain
and evaluators for the left and right derivative.  The catalog below
gives closed forms; :func:`custom` falls back to one-sided finite
differences and marks the result approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InputError

CONVEX = "convex"
CONCAVE = "concave"
INTERIOR_MARGIN = 1e-12
FD_STEP = 1e-6

INF = math.inf


@dataclass(frozen=True)
class FunctionSpec:
    shape: str
    domain: tuple[float, float]
    eval: Callable[[float], float]
    dminus: Callable[[float], float]
    dplus: Callable[[float], float]
    name: str = "custom"
    approximate: bool = False

    def __post_init__(self):
        if self.shape not in (CONVEX, CONCAVE):
            raise InputError(f"shape must be {CONVEX!r} or {CONCAVE!r}")
        lo, hi = self.domain
        if not lo < hi:
            raise InputError("function domain must be a non-degenerate interval")

    def __call__(self, x: float) -> float:
        return float(self.eval(x))

    @property
    def convex(self) -> bool:
        return self.shape == CONVEX

    def in_domain(self, x: float) -> bool:
        lo, hi = self.domain
        return lo <= x <= hi

    def is_interior(self, x: float, margin: float = INTERIOR_MARGIN) -> bool:
        lo, hi = self.domain
        return lo + margin < x < hi - margin

    def negated(self) -> "FunctionSpec":
        return FunctionSpec(
            CONCAVE if self.convex else CONVEX,
            self.domain,
            lambda x, f=self.eval: -f(x),
            lambda x, d=self.dminus: -d(x),
            lambda x, d=self.dplus: -d(x),
            f"neg:{self.name}",
            self.approximate,
        )


def identity(shape: str = CONCAVE) -> FunctionSpec:
    """The identity, usable as either shape."""
    one = lambda x: 1.0  # noqa: E731
    return FunctionSpec(shape, (-INF, INF), lambda x: x, one, one, "identity")


def power(k: float) -> FunctionSpec:
    """``x**k``: convex on the reals for even integer k, otherwise on ``[0, inf)``."""
    k = float(k)
    if k <= 0:
        raise InputError("power exponent must be positive")
    if k == 1:
        return identity(CONVEX)
    even = k.is_integer() and int(k) % 2 == 0
    name = f"power:{k:g}"
    if even:
        kk = int(k)
        d = lambda x: kk * x ** (kk - 1)  # noqa: E731
        return FunctionSpec(CONVEX, (-INF, INF), lambda x: x**kk, d, d, name)
    shape = CONVEX if k > 1 else CONCAVE

    def d(x):
        if x == 0:
            return 0.0 if k > 1 else INF
        return k * x ** (k - 1)

    return FunctionSpec(shape, (0.0, INF), lambda x: x**k, d, d, name)


def square() -> FunctionSpec:
    return power(2)


def sqrt() -> FunctionSpec:
    return power(0.5)


def abs_power(r: float) -> FunctionSpec:
    """``|x|**r`` for ``r >= 1``; convex on the reals."""
    r = float(r)
    if r < 1:
        raise InputError("absolute power needs r >= 1 to be convex")

    def val(x):
        return abs(x) ** r

    def dminus(x):
        if x == 0:
            return -1.0 if r == 1 else 0.0
        return math.copysign(r * abs(x) ** (r - 1), x)

    def dplus(x):
        if x == 0:
            return 1.0 if r == 1 else 0.0
        return math.copysign(r * abs(x) ** (r - 1), x)

    return FunctionSpec(CONVEX, (-INF, INF), val, dminus, dplus, f"abspow:{r:g}")


def exponential() -> FunctionSpec:
    return FunctionSpec(CONVEX, (-INF, INF), math.exp, math.exp, math.exp, "exp")


def piecewise_linear(xs: Sequence[float], ys: Sequence[float]) -> FunctionSpec:
    """Linear interpolation through ``(xs, ys)``; shape inferred from the slopes."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys) or len(xs) < 2:
        raise InputError("piecewise-linear function needs matching breakpoints, at least two")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise InputError("breakpoints must be strictly increasing")
    slopes = [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in zip(xs, xs[1:], ys, ys[1:])]
    if all(b >= a for a, b in zip(slopes, slopes[1:])):
        shape = CONVEX
    elif all(b <= a for a, b in zip(slopes, slopes[1:])):
        shape = CONCAVE
    else:
        raise InputError("piecewise-linear function is neither convex nor concave")

    def seg(x, right):
        for i in range(len(slopes)):
            if (x < xs[i + 1]) if right else (x <= xs[i + 1]):
                return i
        return len(slopes) - 1

    def val(x):
        i = seg(x, True)
        return ys[i] + slopes[i] * (x - xs[i])

    def dminus(x):
        return slopes[seg(x, False)]

    def dplus(x):
        return slopes[seg(x, True)]

    pts = ";".join(f"{x:g},{y:g}" for x, y in zip(xs, ys))
    return FunctionSpec(shape, (xs[0], xs[-1]), val, dminus, dplus, f"pwl:{pts}")


def custom(fn: Callable[[float], float], shape: str, domain=(-INF, INF), name: str = "custom") -> FunctionSpec:
    """Wrap an arbitrary convex/concave ``fn``; derivatives by one-sided differences."""
    h = FD_STEP

    def dminus(x):
        return (fn(x) - fn(x - h)) / h

    def dplus(x):
        return (fn(x + h) - fn(x)) / h

    return FunctionSpec(shape, tuple(domain), fn, dminus, dplus, name, approximate=True)


CATALOG = {
    "identity": identity,
    "square": square,
    "sqrt": sqrt,
    "exp": exponential,
}


def from_name(text: str) -> FunctionSpec:
    """Parse a catalog id: ``square``, ``power:3``, ``abspow:1.5``, ``neg:exp``, ``pwl:0,0;1,1;2,4``."""
    text = text.strip()
    if text.startswith("neg:"):
        return from_name(text[4:]).negated()
    head, _, arg = text.partition(":")
    try:
        if head in CATALOG and not arg:
            return CATALOG[head]()
        if head == "identity" and arg in (CONVEX, CONCAVE):
            return identity(arg)
        if head == "power":
            return power(float(arg))
        if head == "abspow":
            return abs_power(float(arg))
        if head == "pwl":
            pts = [p.split(",") for p in arg.split(";") if p]
            return piecewise_linear([float(p[0]) for p in pts], [float(p[1]) for p in pts])
    except (ValueError, IndexError) as exc:
        raise InputError(f"bad function id {text!r}: {exc}") from None
    raise InputError(f"unknown function id {text!r}")
