"""Exact nonnegative dyadic rationals ``m / 2**k``.

All distances in the word-tree metric are finite sums of powers of one half,
so they are represented here without rounding.  Values are immutable and
kept in canonical form: the exponent is as small as possible, so the
mantissa is odd unless the exponent is already zero (integers, and zero).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import NegativeResult

_TEXT_RE = re.compile(r"^\s*(\d+)\s*/\s*2\^(\d+)\s*$")


@total_ordering
@dataclass(frozen=True, init=False)
class Dyadic:
    mantissa: int
    exponent: int

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa < 0:
            raise NegativeResult(f"negative dyadic {mantissa}/2^{exponent}")
        if exponent < 0:
            mantissa <<= -exponent
            exponent = 0
        if mantissa == 0:
            exponent = 0
        else:
            # strip common powers of two
            tz = (mantissa & -mantissa).bit_length() - 1
            shift = min(tz, exponent)
            mantissa >>= shift
            exponent -= shift
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    @classmethod
    def half_power(cls, k: int) -> Dyadic:
        """The value ``2**-k``."""
        return cls(1, k)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> Dyadic:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    def _aligned(self, other: Dyadic) -> tuple[int, int, int]:
        k = max(self.exponent, other.exponent)
        return self.mantissa << (k - self.exponent), other.mantissa << (k - other.exponent), k

    def __add__(self, other: Dyadic) -> Dyadic:
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, k = self._aligned(other)
        return Dyadic(a + b, k)

    def __sub__(self, other: Dyadic) -> Dyadic:
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, k = self._aligned(other)
        if a < b:
            raise NegativeResult(f"{self} - {other} is negative")
        return Dyadic(a - b, k)

    def __mul__(self, n: int) -> Dyadic:
        if isinstance(n, Dyadic):
            return Dyadic(self.mantissa * n.mantissa, self.exponent + n.exponent)
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return Dyadic(self.mantissa * n, self.exponent)

    __rmul__ = __mul__

    def __lt__(self, other: Dyadic) -> bool:
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a < b

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def scaled(self, k: int) -> int:
        """``self * 2**k`` as an int; raises if that is not integral."""
        if k < self.exponent:
            raise ValueError(f"{self} is not a multiple of 2^-{k}")
        return self.mantissa << (k - self.exponent)

    def as_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)

    def __float__(self) -> float:
        return self.mantissa / (1 << self.exponent)

    def __str__(self) -> str:
        return format_dyadic(self)

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def to_json(self) -> dict:
        return {"m": str(self.mantissa), "k": self.exponent}

    @classmethod
    def from_json(cls, obj: dict) -> Dyadic:
        return cls(int(obj["m"]), int(obj["k"]))


ZERO = Dyadic(0)
ONE = Dyadic(1)


def dy_add(x: Dyadic, y: Dyadic) -> Dyadic:
    return x + y


def dy_sub(x: Dyadic, y: Dyadic) -> Dyadic:
    return x - y


def dy_cmp(x: Dyadic, y: Dyadic) -> int:
    """-1, 0 or 1 as x is less than, equal to or greater than y."""
    a, b, _ = x._aligned(y)
    return (a > b) - (a < b)


def dy_scale(x: Dyadic, n: int) -> Dyadic:
    return x * n


def dy_sum(values) -> Dyadic:
    total = ZERO
    for v in values:
        total = total + v
    return total


def sum_half_powers(exponents) -> Dyadic:
    """Exact ``sum(2**-p for p in exponents)`` using one integer accumulation."""
    exponents = list(exponents)
    if not exponents:
        return ZERO
    k = max(exponents)
    return Dyadic(sum(1 << (k - p) for p in exponents), k)


def format_dyadic(x: Dyadic) -> str:
    """Canonical text form ``m/2^k``; zero is ``0``."""
    if x.mantissa == 0:
        return "0"
    return f"{x.mantissa}/2^{x.exponent}"


def parse_dyadic(text: str) -> Dyadic:
    """Inverse of :func:`format_dyadic`; also accepts plain integers."""
    text = text.strip()
    if text.isdigit():
        return Dyadic(int(text))
    m = _TEXT_RE.match(text)
    if not m:
        raise ValueError(f"not a dyadic literal: {text!r}")
    return Dyadic(int(m.group(1)), int(m.group(2)))
