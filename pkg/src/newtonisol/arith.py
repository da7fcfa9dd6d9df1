"""Exact dyadic numbers, closed intervals with dyadic endpoints, and parsing
of exact coefficient strings."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Exact = Union[int, Fraction, "Dyadic"]


class Dyadic:
    """The number ``mantissa * 2**exponent`` kept in canonical form.

    The mantissa is odd, or zero with exponent zero, so equal values have
    equal representations.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int, exponent: int = 0):
        mantissa = int(mantissa)
        exponent = int(exponent)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        if isinstance(x, int):
            return cls(x)
        if isinstance(x, str):
            return cls.parse(x)
        return cls.from_fraction(Fraction(x))

    @classmethod
    def from_fraction(cls, q: Fraction) -> "Dyadic":
        """Exact conversion; raises ValueError if the denominator is not a power of two."""
        q = Fraction(q)
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls(q.numerator, -(den.bit_length() - 1))

    @classmethod
    def round(cls, q, bits: int, mode: str = "nearest") -> "Dyadic":
        """Round ``q`` to a multiple of ``2**-bits``.

        ``mode`` is one of ``"floor"``, ``"ceil"`` or ``"nearest"``.
        """
        q = Fraction(q) if not isinstance(q, Dyadic) else q.to_fraction()
        num, den = q.numerator, q.denominator
        if bits >= 0:
            num <<= bits
        else:
            den <<= -bits
        if mode == "floor":
            m = num // den
        elif mode == "ceil":
            m = -((-num) // den)
        elif mode == "nearest":
            m = (2 * num + den) // (2 * den)
        else:
            raise ValueError(f"unknown rounding mode {mode!r}")
        return cls(m, -bits)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse ``"m*2^e"``, an integer, ``"p/q"`` with ``q`` a power of two,
        or an exact decimal with a dyadic value."""
        text = text.strip()
        m = _SCALED.fullmatch(text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        return cls.from_fraction(Fraction(text))

    # -- conversion -------------------------------------------------------

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def __int__(self) -> int:
        return int(self.to_fraction())

    def __str__(self) -> str:
        if self.exponent >= 0:
            return str(self.mantissa << self.exponent)
        return f"{self.mantissa}*2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def bit_size(self) -> int:
        return self.mantissa.bit_length()

    # -- arithmetic -------------------------------------------------------

    def _align(self, other: "Dyadic"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        if isinstance(other, int):
            return Dyadic(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return Dyadic(abs(self.mantissa), self.exponent)

    def half(self) -> "Dyadic":
        return Dyadic(self.mantissa, self.exponent - 1)

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by ``2**k``."""
        return Dyadic(self.mantissa, self.exponent + k)

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    # -- comparison -------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, Dyadic):
            a, b, _ = self._align(other)
            return (a > b) - (a < b)
        if isinstance(other, (int, Rational)):
            x = self.to_fraction()
            return (x > other) - (x < other)
        if isinstance(other, float):
            x = self.to_fraction()
            return (x > other) - (x < other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash(self.to_fraction())


_SCALED = re.compile(r"([+-]?\d+)\s*\*\s*2\s*\^\s*\(?\s*([+-]?\d+)\s*\)?")
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?")


def to_fraction(x) -> Fraction:
    if isinstance(x, Dyadic):
        return x.to_fraction()
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse an exact coefficient: integer, ``p/q`` or ``m*2^e``.

    Decimal and exponent notation are refused so that nothing that looks
    like a float is silently accepted.
    """
    text = text.strip()
    m = _SCALED.fullmatch(text)
    if m:
        mant, e = int(m.group(1)), int(m.group(2))
        return Fraction(mant) * Fraction(2) ** e
    if not _RATIONAL.fullmatch(text):
        raise ValueError(f"cannot parse exact number from {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ValueError(f"zero denominator in {text!r}") from exc


def format_dyadic(x: Dyadic) -> str:
    """Serialization used on the wire: exact decimal when the exponent is
    nonnegative, ``m*2^e`` otherwise."""
    return str(x)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` with dyadic endpoints."""

    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        lo, hi = Dyadic.coerce(self.lo), Dyadic.coerce(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def of(cls, lo, hi) -> "Interval":
        return cls(Dyadic.coerce(lo), Dyadic.coerce(hi))

    @property
    def width(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi).half()

    def is_point(self) -> bool:
        return self.lo == self.hi

    def split(self) -> tuple["Interval", "Interval"]:
        m = self.midpoint
        return Interval(self.lo, m), Interval(m, self.hi)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_open(self, x) -> bool:
        return self.lo < x < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        """Closed-interval intersection test; touching endpoints count."""
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other: "Interval") -> "Interval | None":
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        if lo > hi:
            return None
        return Interval(lo, hi)

    def as_fractions(self) -> tuple[Fraction, Fraction]:
        return self.lo.to_fraction(), self.hi.to_fraction()

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"

    def to_json(self) -> list[str]:
        return [format_dyadic(self.lo), format_dyadic(self.hi)]

    @classmethod
    def from_json(cls, data) -> "Interval":
        return cls(Dyadic.parse(data[0]), Dyadic.parse(data[1]))
