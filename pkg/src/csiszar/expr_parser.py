"""A tiny expression language for user-defined core functions of ``t``.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 't' | ident '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-t^2`` is
``-(t^2)`` while ``2^-t`` is ``2^(-t)``. Functions: ln, log2, exp, sqrt, abs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from csiszar.core_functions import (
    INF,
    CoreFunction,
    estimate_limit_at_zero,
    estimate_slope_at_infinity,
)
from csiszar.errors import DomainError, ParseError

FUNCTIONS = {
    "ln": np.log,
    "log2": np.log2,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

_BINARY = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.true_divide,
    "^": np.power,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(src):
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.lastgroup is None:
            raise ParseError(src, pos, "a number, 't', a function name or an operator", src[pos])
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, text, pos = self.peek()
        raise ParseError(self.src, pos, expected, text if kind != "end" else "end of input")

    def expect(self, text):
        if self.peek()[1] != text or self.peek()[0] != "op":
            self.fail(repr(text))
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("an operator or end of input")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "number":
            value = float(text)
            if not np.isfinite(value):
                raise ParseError(self.src, pos, "a finite number", text)
            self.advance()
            return Num(value)
        if kind == "ident":
            if text == "t":
                self.advance()
                return Var()
            if text not in FUNCTIONS:
                raise ParseError(self.src, pos, "'t' or one of " + ", ".join(FUNCTIONS), text)
            self.advance()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(text, arg)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail("a number, 't', a function call or '('")


def parse(src: str):
    """Parse ``src`` into an AST; raises :class:`ParseError` with an offset."""
    return _Parser(src).parse()


def to_source(node) -> str:
    """Canonical, fully parenthesised printer; ``parse(to_source(e)) == e``."""
    if isinstance(node, Num):
        return repr(float(node.value))
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, t):
    """Interpret the AST at ``t`` (numpy broadcasting, no error checks)."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Neg):
        return np.negative(evaluate(node.operand, t))
    if isinstance(node, BinOp):
        return _BINARY[node.op](evaluate(node.left, t), evaluate(node.right, t))
    if isinstance(node, Call):
        return FUNCTIONS[node.name](evaluate(node.arg, t))
    raise TypeError(f"not an expression node: {node!r}")


def compile(expr, domain=(0.0, INF), limit_at_zero=None, slope_at_infinity=None, name=None):
    """Turn an AST (or source text) into a :class:`CoreFunction`.

    Limits that are not supplied are estimated by extrapolation and listed in
    ``CoreFunction.estimated``.
    """
    if isinstance(expr, str):
        name = name or expr
        expr = parse(expr)
    lo, hi = float(domain[0]), float(domain[1])
    if not (0.0 <= lo < hi):
        raise DomainError(f"domain must be a nonempty subinterval of (0, inf), got ({lo}, {hi})")
    ast = expr

    def func(t):
        t = np.asarray(t, dtype=np.float64)
        return np.broadcast_to(evaluate(ast, t), t.shape).astype(np.float64)

    estimated = set()
    if limit_at_zero is None:
        limit_at_zero = estimate_limit_at_zero(func, (lo, hi))
        if limit_at_zero is not None:
            estimated.add("limit_at_zero")
    if slope_at_infinity is None:
        slope_at_infinity = estimate_slope_at_infinity(func, (lo, hi))
        if slope_at_infinity is not None:
            estimated.add("slope_at_infinity")
    return CoreFunction(
        func, (lo, hi), limit_at_zero, slope_at_infinity,
        name or to_source(ast), estimated=frozenset(estimated),
    )
