"""A small expression language for gambles.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | 'abs' '(' expr ')'
            | 'ind' '(' expr CMP expr ')' | '(' expr ')'
    CMP    := '<=' | '>=' | '<' | '>'

``^`` binds tighter than unary minus, so ``-X^2`` is ``-(X^2)``.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import Gamble, Partition
from .errors import DomainMismatch, ParseError, UnknownIdentifier

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<cmp><=|>=|≤|≥|<|>)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_CMP = {"<=": np.less_equal, "≤": np.less_equal, ">=": np.greater_equal, "≥": np.greater_equal,
        "<": np.less, ">": np.greater}
_BIN = {"+": operator.add, "-": operator.sub, "*": operator.mul, "/": operator.truediv}
FUNCTIONS = ("abs", "ind")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class Node:
    def evaluate(self, env: Mapping[str, np.ndarray]) -> np.ndarray | float:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Node):
    value: float

    def evaluate(self, env):
        return self.value

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var(Node):
    name: str

    def evaluate(self, env):
        return env[self.name]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def evaluate(self, env):
        return -self.arg.evaluate(env)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def evaluate(self, env):
        lhs = self.left.evaluate(env)
        rhs = self.right.evaluate(env)
        if self.op == "/" and np.any(np.asarray(rhs) == 0):
            raise DomainMismatch(f"division by a quantity that is zero somewhere in {self}")
        if self.op == "^":
            base = np.asarray(lhs, dtype=float)
            ex = np.asarray(rhs, dtype=float)
            if np.any(ex != np.round(ex)) and np.any(base < 0):
                raise DomainMismatch(f"non-integer power of a negative value in {self}")
            if np.any(ex < 0) and np.any(base == 0):
                raise DomainMismatch(f"negative power of zero in {self}")
            return base**ex
        return _BIN[self.op](lhs, rhs)

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Abs(Node):
    arg: Node

    def evaluate(self, env):
        return np.abs(self.arg.evaluate(env))

    def __str__(self):
        return f"abs({self.arg})"


@dataclass(frozen=True)
class Ind(Node):
    left: Node
    cmp: str
    right: Node

    def evaluate(self, env):
        return _CMP[self.cmp](self.left.evaluate(env), self.right.evaluate(env)).astype(float)

    def __str__(self):
        return f"ind({self.left} {self.cmp} {self.right})"


class _Parser:
    def __init__(self, text: str, names):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.names = set(names) if names is not None else None

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None, kind=None):
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(float(val))
        if kind == "name":
            self.take()
            if val in FUNCTIONS and self.peek()[1] == "(":
                self.take("(")
                inner = self.expr()
                if val == "ind":
                    kind2, cmp, pos2 = self.peek()
                    if kind2 != "cmp":
                        raise ParseError("ind() needs a comparison such as X <= 1", pos2)
                    self.take()
                    node = Ind(inner, cmp, self.expr())
                else:
                    node = Abs(inner)
                self.take(")")
                return node
            if self.names is not None and val not in self.names:
                raise UnknownIdentifier(f"unknown gamble {val!r} at position {pos}")
            return Var(val)
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


@dataclass(frozen=True)
class GambleExpression:
    text: str
    ast: Node

    def evaluate(self, partition: Partition, gambles: Mapping[str, Gamble | np.ndarray]) -> Gamble:
        env = {k: (v.values if isinstance(v, Gamble) else np.asarray(v, dtype=float)) for k, v in gambles.items()}
        out = np.broadcast_to(np.asarray(self.ast.evaluate(env), dtype=float), (partition.n,))
        if not np.all(np.isfinite(out)):
            raise DomainMismatch(f"expression {self.text!r} is not finite on every atom")
        return Gamble(partition, out)

    def __str__(self):
        return self.text


def parse_expression(text: str, names=None) -> GambleExpression:
    """Parse ``text``; identifiers must appear in ``names`` when it is given.

    ``names`` may be any container of gamble names, or an object with a
    ``gambles`` mapping (an :class:`~prevbounds.document.AssessmentDocument`).
    """
    if names is not None and hasattr(names, "gambles"):
        names = names.gambles.keys()
    return GambleExpression(text, _Parser(text, names).parse())
