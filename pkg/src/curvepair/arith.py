"""Exact dyadic numbers and closed intervals over them.

A :class:`Dyadic` is ``mantissa * 2**exponent`` kept in canonical form (odd
mantissa, or zero with exponent 0).  Sums, differences and products of
dyadics are dyadic, so interval arithmetic on them never needs rounding:
every computed endpoint is the exact endpoint of the textbook formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from . import kernels

__all__ = ["Dyadic", "Interval", "IBox", "interval_add", "interval_sub", "interval_mul", "contains_zero"]

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*(?:\*\s*2\s*\^\s*(-?\d+))?\s*$")


@total_ordering
class Dyadic:
    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: int = 0, exponent: int = 0):
        mantissa = int(mantissa)
        if mantissa == 0:
            exponent = 0
        else:
            tz = (mantissa & -mantissa).bit_length() - 1
            if tz:
                mantissa >>= tz
                exponent += tz
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "exponent", int(exponent))

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        """Build from an int, a Dyadic, or a Fraction with power-of-two denominator."""
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls(value.numerator, -(den.bit_length() - 1))
        if isinstance(value, float):
            return cls.coerce(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to Dyadic")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Inverse of ``str``: accepts ``"m*2^e"`` or a plain integer."""
        m = _DYADIC_RE.match(text)
        if not m:
            raise ValueError(f"not a dyadic literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 0))

    def scaled(self, k: int) -> int:
        """Integer ``self * 2**k``; requires ``k >= -exponent``."""
        shift = self.exponent + k
        if shift < 0:
            raise ValueError("scale too small for exact representation")
        return self.mantissa << shift

    def to_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def _align(self, other: "Dyadic"):
        e = min(self.exponent, other.exponent)
        return self.mantissa << (self.exponent - e), other.mantissa << (other.exponent - e), e

    def __add__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.mantissa, self.exponent)

    def __abs__(self):
        return self if self.mantissa >= 0 else -self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave the dyadics")
        return Dyadic(self.mantissa**n, self.exponent * n)

    def __eq__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            if isinstance(other, Fraction):
                return self.to_fraction() == other
            return NotImplemented
        return self.mantissa == other.mantissa and self.exponent == other.exponent

    def __lt__(self, other):
        other = _as_dyadic(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self):
        return hash(self.to_fraction())

    def __repr__(self):
        return f"Dyadic({self.mantissa}, {self.exponent})"

    def __str__(self):
        if self.exponent == 0:
            return str(self.mantissa)
        return f"{self.mantissa}*2^{self.exponent}"


def _as_dyadic(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int):
        return Dyadic(value, 0)
    return NotImplemented


@dataclass(frozen=True)
class Interval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self):
        object.__setattr__(self, "lo", Dyadic.coerce(self.lo))
        object.__setattr__(self, "hi", Dyadic.coerce(self.hi))
        if self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(value, value)

    @classmethod
    def from_scaled(cls, lo: int, hi: int, k: int) -> "Interval":
        """Interval ``[lo/2**k, hi/2**k]``."""
        return cls(Dyadic(lo, -k), Dyadic(hi, -k))

    def __add__(self, other):
        return interval_add(self, other)

    def __sub__(self, other):
        return interval_sub(self, other)

    def __mul__(self, other):
        return interval_mul(self, other)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pow__(self, n: int):
        """Iterated product, except even powers of a zero-straddling interval start at 0."""
        if n < 0:
            raise ValueError("negative power")
        k = max(0, -self.lo.exponent, -self.hi.exponent)
        lo, hi = kernels.ipow(self.lo.scaled(k), self.hi.scaled(k), n)
        return Interval.from_scaled(lo, hi, k * n)

    def __contains__(self, value) -> bool:
        value = Dyadic.coerce(value)
        return self.lo <= value <= self.hi

    def contains_zero(self) -> bool:
        return contains_zero(self)

    def width(self) -> Dyadic:
        return self.hi - self.lo

    def midpoint(self) -> Dyadic:
        return (self.lo + self.hi) * Dyadic(1, -1)

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def interval_add(I: Interval, J: Interval) -> Interval:
    return Interval(I.lo + J.lo, I.hi + J.hi)


def interval_sub(I: Interval, J: Interval) -> Interval:
    return Interval(I.lo - J.hi, I.hi - J.lo)


def interval_mul(I: Interval, J: Interval) -> Interval:
    products = (I.lo * J.lo, I.lo * J.hi, I.hi * J.lo, I.hi * J.hi)
    return Interval(min(products), max(products))


def contains_zero(I: Interval) -> bool:
    return I.lo.mantissa <= 0 <= I.hi.mantissa


class IBox:
    """Axis-aligned box ``x × y``.

    Boxes built by the subdivision carry their scaled-integer form
    ``(xl, xh, yl, yh, k)`` so the kernels can skip the conversion.
    """

    __slots__ = ("x", "y", "_scaled")

    def __init__(self, x: Interval, y: Interval, _scaled=None):
        self.x = x
        self.y = y
        self._scaled = _scaled

    @classmethod
    def from_bounds(cls, x0, y0, x1, y1) -> "IBox":
        return cls(Interval(x0, x1), Interval(y0, y1))

    @classmethod
    def from_scaled(cls, xl: int, xh: int, yl: int, yh: int, k: int) -> "IBox":
        return cls(Interval.from_scaled(xl, xh, k), Interval.from_scaled(yl, yh, k), (xl, xh, yl, yh, k))

    def scaled(self):
        """``(xl, xh, yl, yh, k)`` with every endpoint equal to ``v / 2**k``."""
        if self._scaled is None:
            ends = (self.x.lo, self.x.hi, self.y.lo, self.y.hi)
            k = max(0, *(-d.exponent for d in ends))
            self._scaled = tuple(d.scaled(k) for d in ends) + (k,)
        return self._scaled

    def contains(self, point) -> bool:
        px, py = point
        return px in self.x and py in self.y

    def subset_of(self, other: "IBox") -> bool:
        return self.x.subset_of(other.x) and self.y.subset_of(other.y)

    def bounds(self):
        return (self.x.lo, self.y.lo, self.x.hi, self.y.hi)

    def __eq__(self, other):
        return isinstance(other, IBox) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return f"IBox({self.x!r} x {self.y!r})"
