"""Exact coefficient fields: the rationals and prime fields GF(p).

Rational scalars are plain :class:`fractions.Fraction` values. Prime-field
scalars are :class:`GFElement` instances that overload the arithmetic
operators, so algorithm code can be written once for both fields.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Union

MAX_PRIME = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Rationals:
    """The field Q; scalars are Fractions in lowest terms."""

    name = "q"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, GFElement):
            raise TypeError("cannot coerce a prime-field element into Q")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def parse(self, text: str) -> Fraction:
        return Fraction(text)

    def format(self, x: Fraction) -> str:
        return str(x)

    def random(self, rng: random.Random, spread: int = 3) -> Fraction:
        num = rng.randint(-spread, spread)
        den = rng.choice((1, 1, 1, 2, 3))
        return Fraction(num, den)

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")

    def __repr__(self) -> str:
        return "QQ"


class GFElement:
    __slots__ = ("value", "field")

    def __init__(self, value: int, field: "PrimeField"):
        self.value = value % field.p
        self.field = field

    def _lift(self, other) -> "GFElement":
        if isinstance(other, GFElement):
            if other.field.p != self.field.p:
                raise ValueError("mixing elements of different prime fields")
            return other
        return self.field(other)

    def __add__(self, other):
        return GFElement(self.value + self._lift(other).value, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return GFElement(self.value - self._lift(other).value, self.field)

    def __rsub__(self, other):
        return GFElement(self._lift(other).value - self.value, self.field)

    def __mul__(self, other):
        return GFElement(self.value * self._lift(other).value, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return GFElement(-self.value, self.field)

    def __pos__(self):
        return self

    def __truediv__(self, other):
        other = self._lift(other)
        if other.value == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.field.p)
        return GFElement(self.value * pow(other.value, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        return GFElement(pow(self.value, k, self.field.p), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, GFElement):
            return self.value == other.value and self.field.p == other.field.p
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field(other).value
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF{self.field.p}({self.value})"

    def __str__(self) -> str:
        return str(self.value)


class PrimeField:
    """The prime field GF(p) for a prime p <= 2**31."""

    characteristic: int

    def __init__(self, p: int):
        if not (isinstance(p, int) and p <= MAX_PRIME and _is_prime(p)):
            raise ValueError(f"GF(p) needs a prime p <= 2**31, got {p!r}")
        self.p = p
        self.characteristic = p
        self.name = f"gf:{p}"

    def __call__(self, x) -> GFElement:
        if isinstance(x, GFElement):
            if x.field.p != self.p:
                raise ValueError("mixing elements of different prime fields")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes in GF({self.p})")
            return GFElement(x.numerator * pow(x.denominator, -1, self.p), self)
        if isinstance(x, int):
            return GFElement(x, self)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into GF({self.p})")

    @property
    def zero(self) -> GFElement:
        return GFElement(0, self)

    @property
    def one(self) -> GFElement:
        return GFElement(1, self)

    def parse(self, text: str) -> GFElement:
        return self(Fraction(text))

    def format(self, x: GFElement) -> str:
        return str(x.value)

    def random(self, rng: random.Random, spread: int = 0) -> GFElement:
        return GFElement(rng.randrange(self.p), self)

    def elements(self):
        return [GFElement(i, self) for i in range(self.p)]

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def __repr__(self) -> str:
        return f"GF({self.p})"


Field = Union[Rationals, PrimeField]
Scalar = Union[Fraction, GFElement]

QQ = Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


_FIELD_RE = re.compile(r"^(?:q|gf:(\d+))$")


def field_from_name(name: str) -> Field:
    """Parse a ``--field`` value: ``q`` or ``gf:<p>``."""
    m = _FIELD_RE.match(name.strip().lower())
    if not m:
        raise ValueError(f"unknown field {name!r}; expected 'q' or 'gf:<p>'")
    if m.group(1) is None:
        return QQ
    return PrimeField(int(m.group(1)))
