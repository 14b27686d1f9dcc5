"""JSON assessment documents.

A document names the atoms of a partition, the gambles on it and their
lower (and optionally upper) previsions::

    {"atoms": ["w1", "w2", "w3"],
     "gambles": {"X": [-1, 1, 2]},
     "lower": {"X": 0.75},
     "upper": {}}

Unknown fields are rejected.  Upper previsions become lower previsions on
the negated gamble when the document is turned into an :class:`Assessment`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping

from .core import Assessment, Entry, Gamble, Partition, conjugate_entry
from .errors import DimensionError, ParseError, SchemaError

REQUIRED = ("atoms", "gambles", "lower")
OPTIONAL = ("upper",)


@dataclass(frozen=True)
class AssessmentDocument:
    atoms: tuple[str, ...]
    gambles: Mapping[str, tuple[float, ...]]
    lower: Mapping[str, float]
    upper: Mapping[str, float] = field(default_factory=dict)

    @property
    def partition(self) -> Partition:
        return Partition(self.atoms)

    def gamble(self, name: str) -> Gamble:
        return Gamble(self.partition, self.gambles[name])

    def gamble_objects(self) -> dict[str, Gamble]:
        part = self.partition
        return {k: Gamble(part, v) for k, v in self.gambles.items()}

    def assessment(self) -> Assessment:
        """Lower entries in document order, then conjugates of the uppers."""
        part = self.partition
        entries = [Entry(k, Gamble(part, self.gambles[k]), v) for k, v in self.lower.items()]
        entries += [conjugate_entry(k, Gamble(part, self.gambles[k]), v) for k, v in self.upper.items()]
        return Assessment(part, entries)

    def to_json(self) -> dict:
        return {
            "atoms": list(self.atoms),
            "gambles": {k: list(v) for k, v in self.gambles.items()},
            "lower": dict(self.lower),
            "upper": dict(self.upper),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {type(value).__name__}")
    value = float(value)
    if not math.isfinite(value):
        raise SchemaError(f"{where}: number is not finite")
    return value


def _mapping(obj, key: str) -> dict:
    value = obj[key]
    if not isinstance(value, dict):
        raise SchemaError(f"{key}: expected an object")
    return value


def _reject_constants(token: str):
    raise ValueError(f"non-finite literal {token}")


def from_json(obj) -> AssessmentDocument:
    """Validate an already-decoded JSON value."""
    if not isinstance(obj, dict):
        raise SchemaError("document must be a JSON object")
    unknown = sorted(set(obj) - set(REQUIRED) - set(OPTIONAL))
    if unknown:
        raise SchemaError(f"unknown field(s): {', '.join(unknown)}")
    missing = [k for k in REQUIRED if k not in obj]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")

    atoms = obj["atoms"]
    if not isinstance(atoms, list) or not atoms:
        raise SchemaError("atoms: expected a non-empty array of strings")
    if not all(isinstance(a, str) for a in atoms):
        raise SchemaError("atoms: every atom label must be a string")
    if len(set(atoms)) != len(atoms):
        raise SchemaError("atoms: labels must be distinct")

    gambles = {}
    for name, vec in _mapping(obj, "gambles").items():
        if not isinstance(vec, list):
            raise SchemaError(f"gambles.{name}: expected an array")
        if len(vec) != len(atoms):
            raise DimensionError(f"gambles.{name}: {len(vec)} values for {len(atoms)} atoms")
        gambles[name] = tuple(_real(v, f"gambles.{name}[{i}]") for i, v in enumerate(vec))

    def previsions(key):
        out = {}
        for name, v in _mapping(obj, key).items():
            if name not in gambles:
                raise SchemaError(f"{key}.{name}: no such gamble")
            out[name] = _real(v, f"{key}.{name}")
        return out

    lower = previsions("lower")
    upper = previsions("upper") if "upper" in obj else {}
    return AssessmentDocument(tuple(atoms), gambles, lower, upper)


def parse_document(text: bytes | str) -> AssessmentDocument:
    """Decode UTF-8 JSON and validate it against the document schema."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"document is not UTF-8: {exc.reason}", exc.start) from None
    try:
        obj = json.loads(text, parse_constant=_reject_constants)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", exc.pos) from None
    except ValueError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_json(obj)


def load_document(path) -> AssessmentDocument:
    with open(path, "rb") as fh:
        return parse_document(fh.read())
