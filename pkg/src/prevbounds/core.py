"""Finite partitions, gambles, events and assessments.

Everything here is immutable.  A :class:`Gamble` is a vector of finite
reals indexed by the atoms of a :class:`Partition`; an
:class:`Assessment` attaches lower previsions to a finite family of
gambles on a common partition.  Upper previsions are never stored: an
assessed ``upr(X) = u`` becomes the entry ``(-X, -u)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainMismatch, EmptyConditioningEvent, InputError, OutOfRange

#: two stored reals closer than this are the same image point
IMAGE_TOL = 1e-12


@dataclass(frozen=True)
class Partition:
    atoms: tuple[str, ...]

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        if not atoms:
            raise InputError("a partition needs at least one atom")
        if any(not isinstance(a, str) or not a for a in atoms):
            raise InputError("atom labels must be non-empty strings")
        if len(set(atoms)) != len(atoms):
            raise InputError("atom labels must be distinct")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def of_size(cls, n: int) -> "Partition":
        return cls(f"w{i + 1}" for i in range(n))

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def n(self) -> int:
        return len(self.atoms)

    def gamble(self, values: Sequence[float]) -> "Gamble":
        return Gamble(self, values)

    def constant(self, c: float) -> "Gamble":
        return Gamble(self, [c] * self.n)

    def event(self, members: Iterable[int]) -> "Event":
        return Event(self, members)


class Gamble:
    """A bounded map from the atoms of a partition to the reals."""

    __slots__ = ("partition", "_values")

    def __init__(self, partition: Partition, values: Sequence[float]):
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.shape[0] != partition.n:
            raise DomainMismatch(
                f"gamble has {arr.shape[0]} values but the partition has {partition.n} atoms"
            )
        if not np.all(np.isfinite(arr)):
            raise InputError("gamble values must be finite")
        arr.setflags(write=False)
        self.partition = partition
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __len__(self) -> int:
        return self._values.shape[0]

    def __iter__(self):
        return iter(self._values.tolist())

    def __repr__(self) -> str:
        return f"Gamble({self._values.tolist()!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gamble):
            return NotImplemented
        return self.partition == other.partition and np.array_equal(self._values, other._values)

    def __hash__(self) -> int:
        return hash((self.partition, self._values.tobytes()))

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Gamble):
            if other.partition != self.partition:
                raise DomainMismatch("gambles live on different partitions")
            return other._values
        return float(other)

    def __neg__(self) -> "Gamble":
        return Gamble(self.partition, -self._values)

    def __add__(self, other) -> "Gamble":
        return Gamble(self.partition, self._values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Gamble":
        return Gamble(self.partition, self._values - self._coerce(other))

    def __rsub__(self, other) -> "Gamble":
        return Gamble(self.partition, self._coerce(other) - self._values)

    def __mul__(self, other) -> "Gamble":
        return Gamble(self.partition, self._values * self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k) -> "Gamble":
        return Gamble(self.partition, self._values ** float(k))

    def __abs__(self) -> "Gamble":
        return Gamble(self.partition, np.abs(self._values))

    def map(self, fn) -> "Gamble":
        return Gamble(self.partition, [fn(v) for v in self._values.tolist()])

    @property
    def inf(self) -> float:
        return float(self._values.min())

    @property
    def sup(self) -> float:
        return float(self._values.max())

    def image(self) -> list[float]:
        """Sorted distinct values, merged within :data:`IMAGE_TOL`."""
        return _merge_sorted(sorted(self._values.tolist()))

    def is_nonnegative(self) -> bool:
        return bool(np.all(self._values >= 0.0))

    def le(self, c: float) -> "Event":
        return Event(self.partition, np.flatnonzero(self._values <= c))

    def ge(self, c: float) -> "Event":
        return Event(self.partition, np.flatnonzero(self._values >= c))

    def lt(self, c: float) -> "Event":
        return Event(self.partition, np.flatnonzero(self._values < c))

    def gt(self, c: float) -> "Event":
        return Event(self.partition, np.flatnonzero(self._values > c))


def _merge_sorted(vals: list[float]) -> list[float]:
    out: list[float] = []
    for v in vals:
        if not out or v - out[-1] > IMAGE_TOL:
            out.append(v)
    return out


@dataclass(frozen=True)
class Event:
    partition: Partition
    members: frozenset[int]

    def __init__(self, partition: Partition, members: Iterable[int]):
        members = frozenset(int(m) for m in members)
        if any(m < 0 or m >= partition.n for m in members):
            raise InputError("event members must be atom indices of the partition")
        object.__setattr__(self, "partition", partition)
        object.__setattr__(self, "members", members)

    @property
    def indicator(self) -> Gamble:
        vals = np.zeros(self.partition.n)
        vals[sorted(self.members)] = 1.0
        return Gamble(self.partition, vals)

    def is_empty(self) -> bool:
        return not self.members

    def complement(self) -> "Event":
        return Event(self.partition, set(range(self.partition.n)) - self.members)


@dataclass(frozen=True)
class ConditionalGamble:
    base: Gamble
    condition: Event

    def __post_init__(self):
        if self.condition.is_empty():
            raise EmptyConditioningEvent("conditioning event is empty")
        if self.condition.partition != self.base.partition:
            raise DomainMismatch("event and gamble live on different partitions")

    def values(self) -> list[float]:
        """Values on the conditioning event, in atom order."""
        return [float(self.base.values[i]) for i in sorted(self.condition.members)]

    def image(self) -> list[float]:
        return _merge_sorted(sorted(self.values()))


@dataclass(frozen=True)
class HoleBracket:
    lower: float
    upper: float

    @property
    def strict(self) -> bool:
        return self.lower < self.upper


@dataclass(frozen=True)
class Entry:
    name: str
    gamble: Gamble
    lower: float


class Assessment:
    """Lower previsions on a finite family of gambles over one partition."""

    def __init__(self, partition: Partition, entries: Iterable[Entry | tuple] = ()):
        self.partition = partition
        items: list[Entry] = []
        seen: set[str] = set()
        for e in entries:
            if not isinstance(e, Entry):
                e = Entry(*e)
            if e.gamble.partition != partition:
                raise DomainMismatch(f"gamble {e.name!r} is not on the assessment's partition")
            if e.name in seen:
                raise InputError(f"duplicate entry name {e.name!r}")
            if not math.isfinite(e.lower):
                raise InputError(f"lower prevision of {e.name!r} is not finite")
            seen.add(e.name)
            items.append(Entry(e.name, e.gamble, float(e.lower)))
        self.entries: tuple[Entry, ...] = tuple(items)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{e.name}: {e.lower!r}" for e in self.entries)
        return f"Assessment(n={self.partition.n}, {{{body}}})"

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def entry(self, name: str) -> Entry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def gamble(self, name: str) -> Gamble:
        return self.entry(name).gamble

    def with_lower(self, name: str, gamble: Gamble, lower: float) -> "Assessment":
        return Assessment(self.partition, [*self.entries, Entry(name, gamble, lower)])

    def with_upper(self, name: str, gamble: Gamble, upper: float) -> "Assessment":
        return Assessment(self.partition, [*self.entries, conjugate_entry(name, gamble, upper)])

    @classmethod
    def precise(cls, partition: Partition, p: Sequence[float]) -> "Assessment":
        """Pin one probability vector: lower = upper on every atom indicator."""
        p = [float(v) for v in p]
        entries = []
        for i, pi in enumerate(p):
            ind = partition.event([i]).indicator
            entries.append(Entry(f"I{i}", ind, pi))
            entries.append(conjugate_entry(f"I{i}", ind, pi))
        return cls(partition, entries)


def bounds_of(g: Gamble) -> tuple[float, float]:
    return g.inf, g.sup


def restrict(g: Gamble, b: Event) -> ConditionalGamble:
    return ConditionalGamble(g, b)


def conjugate_entry(name: str, g: Gamble, upper: float) -> Entry:
    """Encode ``upr(g) = upper`` as a lower prevision on ``-g``.

    Names toggle a leading ``-`` so applying this twice gives back the
    original triple.
    """
    new_name = name[1:] if name.startswith("-") else "-" + name
    return Entry(new_name, -g, -float(upper))


def hole_bracket(g: Gamble, k: float) -> HoleBracket:
    """Nearest image values at or below and at or above ``k``."""
    lo, hi = g.inf, g.sup
    if not (lo - IMAGE_TOL <= k <= hi + IMAGE_TOL):
        raise OutOfRange(f"{k!r} lies outside [{lo!r}, {hi!r}]")
    below = None
    above = None
    for v in g.image():
        if abs(v - k) <= IMAGE_TOL:
            return HoleBracket(v, v)
        if v < k:
            below = v
        elif above is None:
            above = v
    # k within tolerance of an endpoint has already returned
    return HoleBracket(below, above)


def apply_function(g: Gamble, f) -> Gamble:
    """Pointwise image ``f(g)``; every value of ``g`` must lie in f's domain."""
    lo, hi = f.domain
    vals = g.values
    if np.any(vals < lo) or np.any(vals > hi):
        raise DomainMismatch(f"values of the gamble leave the domain [{lo}, {hi}] of {f.name}")
    return Gamble(g.partition, [f(v) for v in vals.tolist()])
