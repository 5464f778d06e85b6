"""Recursive-descent parser for polynomial and derivation expressions.

Grammar (usual precedence, ``^`` binds tightest, unary minus below ``*``)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := "-" unary | power
    power  := atom ["^" INT]
    atom   := INT ["/" INT] | "x" INT | "dx" INT | "(" expr ")"

``dx`` atoms are only accepted when parsing a derivation, where a value is
either a polynomial or a vector of coefficients; a derivation may be
multiplied by a polynomial but never by another derivation.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .errors import ParseError
from .poly import Poly, RingSpec

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.)")
_VAR = re.compile(r"x(\d+)\Z")
_DX = re.compile(r"dx(\d+)\Z")


class Token(NamedTuple):
    kind: str  # INT, VAR, DX, OP, END
    value: object
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, n = 0, len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(Token("INT", int(num), pos))
        elif ident is not None:
            if (v := _VAR.match(ident)) is not None:
                tokens.append(Token("VAR", int(v.group(1)), pos))
            elif (d := _DX.match(ident)) is not None:
                tokens.append(Token("DX", int(d.group(1)), pos))
            else:
                raise ParseError(f"unknown identifier {ident!r}", pos)
        elif op not in "+-*/^()":
            raise ParseError(f"unexpected character {op!r}", pos)
        else:
            tokens.append(Token("OP", op, pos))
        pos = m.end()
    tokens.append(Token("END", None, n))
    return tokens


class _Vec:
    """Coefficient vector of a derivation under construction."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = coeffs


class _Parser:
    def __init__(self, text: str, ring: RingSpec, allow_dx: bool):
        self.text = text
        self.ring = ring
        self.allow_dx = allow_dx
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at_op(self, op: str) -> bool:
        tok = self.peek()
        return tok.kind == "OP" and tok.value == op

    def expect_op(self, op: str) -> Token:
        tok = self.peek()
        if not (tok.kind == "OP" and tok.value == op):
            raise ParseError(f"expected {op!r}, found {_describe(tok)}", tok.pos)
        return self.advance()

    def parse(self):
        if self.peek().kind == "END":
            raise ParseError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok.kind != "END":
            raise ParseError(f"unexpected {_describe(tok)}", tok.pos)
        return value

    def expr(self):
        left = self.term()
        while self.at_op("+") or self.at_op("-"):
            op = self.advance()
            right = self.term()
            left = self._combine(left, right, op)
        return left

    def term(self):
        left = self.unary()
        while self.at_op("*"):
            op = self.advance()
            right = self.unary()
            left = self._product(left, right, op)
        return left

    def unary(self):
        if self.at_op("-"):
            self.advance()
            v = self.unary()
            if isinstance(v, _Vec):
                return _Vec([-c for c in v.coeffs])
            return -v
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            op = self.advance()
            tok = self.peek()
            if tok.kind == "OP" and tok.value == "-":
                raise ParseError("negative exponent", tok.pos)
            if tok.kind != "INT":
                raise ParseError(f"exponent must be an integer, found {_describe(tok)}", tok.pos)
            self.advance()
            if isinstance(base, _Vec):
                raise ParseError("cannot raise a derivation to a power", op.pos)
            return base ** tok.value
        return base

    def atom(self):
        tok = self.advance()
        if tok.kind == "INT":
            value = Fraction(tok.value)
            if self.at_op("/"):
                self.advance()
                den = self.peek()
                if den.kind != "INT":
                    raise ParseError(f"expected integer denominator, found {_describe(den)}", den.pos)
                self.advance()
                if den.value == 0:
                    raise ParseError("division by zero", den.pos)
                value = Fraction(tok.value, den.value)
            return Poly.const(self.ring, value)
        if tok.kind == "VAR":
            self._check_var(tok)
            return Poly.var(self.ring, tok.value)
        if tok.kind == "DX":
            if not self.allow_dx:
                raise ParseError("derivation symbol in a polynomial expression", tok.pos)
            self._check_var(tok)
            coeffs = [Poly.zero(self.ring)] * self.ring.nvars
            coeffs[tok.value - 1] = Poly.const(self.ring, 1)
            return _Vec(coeffs)
        if tok.kind == "OP" and tok.value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {_describe(tok)}", tok.pos)

    def _check_var(self, tok: Token) -> None:
        if not 1 <= tok.value <= self.ring.nvars:
            raise ParseError("variable index out of range", tok.pos)

    def _combine(self, a, b, op: Token):
        sign = 1 if op.value == "+" else -1
        if isinstance(a, _Vec) and isinstance(b, _Vec):
            return _Vec([x + sign * y for x, y in zip(a.coeffs, b.coeffs)])
        if isinstance(a, _Vec) or isinstance(b, _Vec):
            raise ParseError("cannot add a polynomial and a derivation", op.pos)
        return a + b if sign > 0 else a - b

    def _product(self, a, b, op: Token):
        if isinstance(a, _Vec) and isinstance(b, _Vec):
            raise ParseError("cannot multiply two derivations", op.pos)
        if isinstance(a, _Vec):
            return _Vec([c * b for c in a.coeffs])
        if isinstance(b, _Vec):
            return _Vec([a * c for c in b.coeffs])
        return a * b


def _describe(tok: Token) -> str:
    if tok.kind == "END":
        return "end of input"
    if tok.kind == "OP":
        return repr(tok.value)
    if tok.kind == "VAR":
        return f"'x{tok.value}'"
    if tok.kind == "DX":
        return f"'dx{tok.value}'"
    return repr(str(tok.value))


def parse_poly(text: str, ring: RingSpec) -> Poly:
    """Parse ``text`` into a canonical Poly of ``ring``; series terms of degree >= N drop out."""
    return _Parser(text, ring, allow_dx=False).parse()


def parse_derivation_coeffs(text: str, ring: RingSpec) -> list[Poly]:
    """Parse ``a1*dx1 + ... `` into the coefficient list ``[a1, ..., an]``.

    A bare zero polynomial is accepted as the zero derivation.
    """
    value = _Parser(text, ring, allow_dx=True).parse()
    if isinstance(value, _Vec):
        return list(value.coeffs)
    if not value:
        return [Poly.zero(ring)] * ring.nvars
    raise ParseError("expected a derivation (terms of the form p*dxj)", 0)
