"""Text grammar for polynomials, rationals and points.

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | IDENT | '(' expr ')'

Identifiers may contain primes (``y'``) so that chart variables round-trip.
Juxtaposition (``2x``, ``x y``) is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .exactalg import Poly

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars):
        self.text = text
        self.vars = tuple(vars)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Poly:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r} (implicit multiplication is not allowed)", pos)
        return result

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, _ = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> Poly:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            num = int(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "int":
                    raise ParseError("malformed rational literal: denominator must be an integer", p2)
                if int(v2) == 0:
                    raise ParseError("malformed rational literal: zero denominator", p2)
                return Poly.const(self.vars, Fraction(num, int(v2)))
            return Poly.const(self.vars, num)
        if kind == "ident":
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}", pos)
            return Poly.var(self.vars, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_poly(text: str, vars) -> Poly:
    return _Parser(text, vars).parse()


def parse_rational(text: str) -> Fraction:
    m = re.fullmatch(r"\s*([-+]?\d+)\s*(?:/\s*(\d+)\s*)?", text)
    if not m:
        raise ParseError(f"malformed rational {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"malformed rational {text!r}: zero denominator")
    return Fraction(int(m.group(1)), den)


def parse_vars(text: str) -> tuple[str, ...]:
    names = tuple(v.strip() for v in text.split(",") if v.strip())
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", v):
            raise ParseError(f"invalid variable name {v!r}")
    if len(set(names)) != len(names):
        raise ParseError("variable names must be unique")
    if not names:
        raise ParseError("at least one variable is required")
    return names


def parse_point(text: str, vars) -> tuple[Fraction, ...]:
    """``"x=1,y=-1/2"`` -> coordinates in ``vars`` order; omitted entries are 0."""
    vals = {v: Fraction(0) for v in vars}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ParseError(f"point entry {item!r} must look like name=value")
        name, value = (s.strip() for s in item.split("=", 1))
        if name not in vals:
            raise ParseError(f"unknown variable {name!r} in point")
        vals[name] = parse_rational(value)
    return tuple(vals[v] for v in vars)
