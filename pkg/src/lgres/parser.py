"""Recursive-descent parser for polynomial / series expressions.

Grammar (whitespace is ignored between tokens)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT ["/" INT] | IDENT | "(" expr ")"

``/`` only forms rational literals. Juxtaposition ("2x") is rejected.
Identifiers resolve to declared variables or to named q-series.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .rings.mpoly import MPoly
from .rings.qseries import QSeries


class ParseError(ValueError):
    def __init__(self, message: str, position: int, source: str = ""):
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position
        self.source = source


@dataclass
class Env:
    """Declarations an expression is parsed against.

    ``series`` maps identifiers to already-built q-series; ``series_names``
    lists identifiers to be bound lazily through :func:`lgres.theta.named_series`
    at ``precision`` in ``convention``.
    """

    variables: tuple = ()
    laurent: tuple = ()
    series: dict = field(default_factory=dict)
    series_names: tuple = ()
    precision: int = 0
    convention: str = "appendixB"

    def __post_init__(self):
        self.variables = tuple(self.variables)
        laurent = tuple(self.laurent)
        if laurent and not all(isinstance(x, bool) for x in laurent):
            laurent = tuple(v in laurent for v in self.variables)
        self.laurent = laurent or (False,) * len(self.variables)

    def lookup_series(self, name: str) -> QSeries | None:
        if name in self.series:
            return self.series[name]
        if name in self.series_names:
            from .theta import named_series

            s = named_series(name, self.precision, self.convention)
            self.series[name] = s
            return s
        return None


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    kind: str          # int, rational, ident, add, sub, mul, pow, neg
    pos: int
    value: object = None
    children: tuple = ()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(src: str) -> list[tuple[str, object, int]]:
    toks = []
    i = 0
    n = len(src)
    while i < n:
        if src[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(src, i)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("INT", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("IDENT", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ParseError(f"unexpected character {ch!r}", start, src)
            toks.append((ch, ch, start))
        i = m.end()
    toks.append(("EOF", None, n))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise self.error(f"expected {kind}", tok)
        self.i += 1
        return tok

    def error(self, msg, tok):
        what = "end of input" if tok[0] == "EOF" else repr(tok[1])
        return ParseError(f"{msg}, found {what}", tok[2], self.src)

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise self.error("unexpected token", tok)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()
            rhs = self.term()
            node = Node("add" if op[0] == "+" else "sub", op[2], None, (node, rhs))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] == "*":
            op = self.take()
            node = Node("mul", op[2], None, (node, self.unary()))
        return node

    def unary(self) -> Node:
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return Node("neg", tok[2], None, (self.unary(),))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[0] == "^":
            op = self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok[0] != "INT":
                raise self.error("exponent must be an integer literal", tok)
            self.take()
            return Node("pow", op[2], sign * tok[1], (base,))
        return base

    def atom(self) -> Node:
        tok = self.peek()
        if tok[0] == "INT":
            self.take()
            if self.peek()[0] == "/":
                self.take()
                den = self.peek()
                if den[0] != "INT":
                    raise self.error("expected integer denominator", den)
                self.take()
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2], self.src)
                return Node("rational", tok[2], Fraction(tok[1], den[1]))
            return Node("int", tok[2], tok[1])
        if tok[0] == "IDENT":
            self.take()
            return Node("ident", tok[2], tok[1])
        if tok[0] == "(":
            self.take()
            node = self.expr()
            if self.peek()[0] != ")":
                raise self.error("expected ')'", self.peek())
            self.take()
            return node
        raise self.error("expected a number, identifier or '('", tok)


def parse_ast(src: str) -> Node:
    return _Parser(src).parse()


def _eval(node: Node, env: Env, src: str) -> MPoly:
    vs, lf = env.variables, env.laurent
    k = node.kind
    if k in ("int", "rational"):
        return MPoly.const(vs, node.value, lf)
    if k == "ident":
        name = node.value
        if name in vs:
            return MPoly.var(vs, name, lf)
        s = env.lookup_series(name)
        if s is None:
            raise ParseError(f"unknown identifier {name!r}", node.pos, src)
        return MPoly.const(vs, s, lf)
    if k == "neg":
        return -_eval(node.children[0], env, src)
    if k in ("add", "sub", "mul"):
        a = _eval(node.children[0], env, src)
        b = _eval(node.children[1], env, src)
        return a + b if k == "add" else a - b if k == "sub" else a * b
    if k == "pow":
        base = _eval(node.children[0], env, src)
        e = node.value
        if e < 0:
            if len(base) != 1:
                raise ParseError("negative exponent on a non-monomial", node.pos, src)
            (mono, _), = base.terms.items()
            bad = [v for v, x, f in zip(vs, mono, lf) if x and not f]
            if bad:
                raise ParseError(f"negative exponent on non-Laurent variable {bad[0]!r}", node.pos, src)
        try:
            return base ** e
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), node.pos, src) from None
    raise AssertionError(k)


def parse_expression(src: str, env: Env | None = None) -> MPoly:
    """Parse ``src`` into a canonical :class:`MPoly` over ``env``'s variables."""
    env = env or Env()
    return _eval(parse_ast(src), env, src)


def parse_matrix(rows, env: Env) -> list[list[MPoly]]:
    """Row-major list of expression strings (or a single string for 1x1)."""
    if isinstance(rows, str):
        rows = [[rows]]
    return [[parse_expression(s, env) for s in row] for row in rows]
