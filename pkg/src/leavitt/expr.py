"""Parser for the canonical text form of elements.

Grammar::

    Expr   := ['-'] Term (('+' | '-') Term)*
    Term   := [Scalar '*'] Factor ('.' Factor)* | Scalar
    Factor := ID ['*']
    ID     := NAME | '(' ID ',' ID ')'
    Scalar := INT ['/' INT]

A bare scalar denotes that multiple of the identity (sum of all vertices).
A product of factors that multiplies to zero (e.g. a broken path) is
dropped with a :class:`ZeroMonomialWarning`.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import Element
from .fields import QQ, Field
from .graph import Graph


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ZeroMonomialWarning(UserWarning):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*./(),]))")


@dataclass(frozen=True)
class Token:
    kind: str     # num | name | op | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


@dataclass(frozen=True)
class FactorExpr:
    ident: str
    ghost: bool


@dataclass(frozen=True)
class TermExpr:
    sign: int
    scalar: Optional[Fraction]
    factors: tuple[FactorExpr, ...]
    pos: int


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def eat(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        t = self.eat(kind, text)
        if t is None:
            want = text or kind
            got = self.tok.text or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", self.tok.pos)
        return t

    def expr(self) -> list[TermExpr]:
        terms = []
        sign = -1 if self.eat("op", "-") else 1
        terms.append(self.term(sign))
        while True:
            if self.eat("op", "+"):
                terms.append(self.term(1))
            elif self.eat("op", "-"):
                terms.append(self.term(-1))
            else:
                break
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return terms

    def term(self, sign: int) -> TermExpr:
        pos = self.tok.pos
        scalar = None
        if self.tok.kind == "num":
            scalar = self.scalar()
            if not self.eat("op", "*"):
                return TermExpr(sign, scalar, (), pos)
        factors = [self.factor()]
        while self.eat("op", "."):
            factors.append(self.factor())
        return TermExpr(sign, scalar, tuple(factors), pos)

    def scalar(self) -> Fraction:
        num = int(self.expect("num").text)
        if self.eat("op", "/"):
            den_tok = self.expect("num")
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.pos)
            return Fraction(num, den)
        return Fraction(num)

    def factor(self) -> FactorExpr:
        ident = self.ident()
        ghost = bool(self.eat("op", "*"))
        return FactorExpr(ident, ghost)

    def ident(self) -> str:
        if self.eat("op", "("):
            a = self.ident()
            self.expect("op", ",")
            b = self.ident()
            self.expect("op", ")")
            return f"({a},{b})"
        t = self.tok
        if t.kind != "name":
            raise ParseError(f"expected an identifier, got {t.text or 'end of input'!r}", t.pos)
        self.i += 1
        return t.text


def parse_terms(text: str) -> list[TermExpr]:
    return _Parser(text).expr()


def parse_element(text: str, g: Graph, field: Field = QQ) -> Element:
    terms = parse_terms(text)
    total = Element.zero(g, field)
    for t in terms:
        coeff = field(t.scalar if t.scalar is not None else 1)
        if t.sign < 0:
            coeff = -coeff
        if not t.factors:
            total = total + Element.identity(g, field).scale(coeff)
            continue
        value = None
        for f in t.factors:
            el = _factor_element(f, g, field, t.pos)
            value = el if value is None else value * el
            if value.is_zero():
                break
        if value.is_zero():
            warnings.warn(f"zero monomial dropped at position {t.pos}", ZeroMonomialWarning,
                          stacklevel=2)
            continue
        total = total + value.scale(coeff)
    return total


def _factor_element(f: FactorExpr, g: Graph, field: Field, pos: int) -> Element:
    if g.has_vertex(f.ident):
        return Element.vertex(g, f.ident, field)
    if g.has_edge(f.ident):
        if f.ghost:
            return Element.ghost_edge(g, f.ident, field)
        return Element.edge(g, f.ident, field)
    raise ParseError(f"unknown id {f.ident!r}", pos)
