"""Recursive-descent parser for scalar expressions.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := NUMBER | VAR | PARAM | ('exp' | 'coth') '(' expr ')' | '(' expr ')'

``VAR`` is ``λ<int>`` or ``l<int>``; any other identifier is a named
parameter.  The argument of ``exp``/``coth`` must be a rational linear form
in the λ variables.  Errors carry 1-based line and column.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import List, Tuple, Union

from .scalar import ScalarFunction


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Func:
    name: str
    arg: "Node"


Node = Union[Num, Var, Param, Neg, BinOp, Pow, Func]

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<var>(?:λ|l)(?P<idx>\d+)(?![A-Za-z_0-9]))
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup if m.lastgroup != "idx" else "var"
        if m.group("var"):
            kind = "var"
        if kind != "ws":
            toks.append((kind, m.group(0), pos))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


def _linecol(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, pos: int):
        raise ParseError(msg, *_linecol(self.text, pos))

    def check_closed(self, pos: int):
        depth = 0
        for kind, val, _ in self.toks[self.i:]:
            if val == "(" and kind == "op":
                depth += 1
            elif val == ")" and kind == "op":
                if depth == 0:
                    return
                depth -= 1
        self.error("unclosed '('", pos)

    def expect(self, value: str):
        t = self.next()
        if t[1] != value:
            where = "end of input" if t[0] == "end" else repr(t[1])
            self.error(f"expected {value!r}, found {where}", t[2])
        return t

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            self.error(f"unexpected {t[1]!r}", t[2])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.next()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[1] == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[1] == "^":
            self.next()
            sign = 1
            if self.peek()[1] == "-":
                self.next()
                sign = -1
            t = self.next()
            if t[0] != "num" or "." in t[1]:
                self.error("exponent must be an integer", t[2])
            return Pow(base, sign * int(t[1]))
        return base

    def atom(self) -> Node:
        kind, val, pos = self.next()
        if kind == "num":
            return Num(Fraction(Decimal(val)))
        if kind == "var":
            idx = int(val[1:])
            if idx < 1:
                self.error("variable index must be >= 1", pos)
            return Var(idx)
        if kind == "ident":
            if val in ("exp", "coth"):
                lp = self.peek()
                self.expect("(")
                self.check_closed(lp[2])
                arg = self.expr()
                self.expect(")")
                try:
                    linform(arg)
                except ValueError as e:
                    self.error(f"{val} argument: {e}", lp[2])
                return Func(val, arg)
            return Param(val)
        if val == "(":
            self.check_closed(pos)
            node = self.expr()
            self.expect(")")
            return node
        where = "end of input" if kind == "end" else repr(val)
        self.error(f"unexpected {where}", pos)


def parse(text: str) -> Node:
    """Parse an expression string into a syntax tree."""
    return _Parser(text).parse()


def linform(node: Node) -> dict:
    """Coefficients {λ-name: rational} of a linear form; ValueError otherwise."""
    f = to_scalar(node)
    if f.den:
        raise ValueError("not a linear form")
    out = {}
    for (poly, ex), c in f.num.terms.items():
        if ex or len(poly) != 1 or poly[0][1] != 1 or not re.fullmatch(r"l\d+", poly[0][0]):
            raise ValueError("not a linear form in the λ variables")
        out[poly[0][0]] = c
    return out


def to_scalar(node: Node) -> ScalarFunction:
    if isinstance(node, Num):
        return ScalarFunction.const(node.value)
    if isinstance(node, Var):
        return ScalarFunction.lam(node.index)
    if isinstance(node, Param):
        return ScalarFunction.var(node.name)
    if isinstance(node, Neg):
        return -to_scalar(node.operand)
    if isinstance(node, Pow):
        return to_scalar(node.base) ** node.exponent
    if isinstance(node, Func):
        lf = linform(node.arg)
        return ScalarFunction.exp(lf) if node.name == "exp" else ScalarFunction.coth(lf)
    a, b = to_scalar(node.left), to_scalar(node.right)
    return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)


def parse_scalar(text: str) -> ScalarFunction:
    return to_scalar(parse(text))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _num_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    d = Decimal(v.numerator) / Decimal(v.denominator)
    return format(d.normalize(), "f")


def pretty(node: Node) -> str:
    """Print a tree so that ``parse(pretty(t)) == t``."""
    return _pp(node, 0)


def _pp(node: Node, ctx: int) -> str:
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return f"λ{node.index}"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Func):
        return f"{node.name}({_pp(node.arg, 0)})"
    if isinstance(node, Neg):
        s = "-" + _pp(node.operand, 3)
        return f"({s})" if ctx > 2 else s
    if isinstance(node, Pow):
        s = f"{_pp(node.base, 4)}^{node.exponent}"
        return f"({s})" if ctx > 3 else s
    p = _PREC[node.op]
    # left-associative: the right operand needs strictly higher precedence
    s = f"{_pp(node.left, p)} {node.op} {_pp(node.right, p + 1)}"
    return f"({s})" if ctx > p else s


def scalar_text(f: ScalarFunction) -> str:
    """Grammar-conformant text for a scalar function (exp form, reparsable)."""
    def mono(key, c):
        poly, ex = key
        parts = []
        for n, a in poly:
            v = f"λ{n[1:]}" if re.fullmatch(r"l\d+", n) else n
            parts.append(v if a == 1 else f"{v}^{a}")
        if ex:
            lin = " + ".join(f"{_frac(b)}*λ{n[1:]}" for n, b in ex)
            parts.append(f"exp({lin})")
        body = "*".join(parts)
        if not body:
            return _frac(c)
        return body if c == 1 else f"{_frac(c)}*{body}"

    def poly(p):
        if p.is_zero():
            return "0"
        return " + ".join(mono(k, c) for k, c in sorted(p.terms.items()))

    num = f"({poly(f.num)})"
    if not f.den:
        return num
    dens = "*".join(f"({poly(g)})^{m}" for g, m in f.den.values())
    return f"{num}/({dens})"


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"
