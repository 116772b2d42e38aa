"""Exact arithmetic in Z[i] and Q(i).

Nothing in here ever rounds: Gaussian integers wrap a pair of Python ints and
Gaussian rationals wrap a pair of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Union

__all__ = [
    "GaussianInt",
    "GaussianRational",
    "hurwitz_floor",
    "norm_inf",
    "abs_sq",
    "in_U",
    "in_closed_U",
    "as_rational",
]

HALF = Fraction(1, 2)


class GaussianInt:
    """An element ``re + im*i`` of Z[i]."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0) -> None:
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianInt is immutable")

    @classmethod
    def coerce(cls, other) -> GaussianInt:
        if isinstance(other, GaussianInt):
            return other
        if isinstance(other, int):
            return cls(other, 0)
        if isinstance(other, (tuple, list)) and len(other) == 2:
            return cls(other[0], other[1])
        raise TypeError(f"cannot interpret {other!r} as a Gaussian integer")

    def __repr__(self) -> str:
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"

    def __iter__(self):
        yield self.re
        yield self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        if isinstance(other, GaussianRational):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return NotImplemented
        o = GaussianInt.coerce(other)
        return GaussianInt(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> GaussianRational:
        return GaussianRational(self) / other

    def __rtruediv__(self, other) -> GaussianRational:
        return as_rational(other) / GaussianRational(self)

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm_sq(self) -> int:
        return self.re * self.re + self.im * self.im

    def norm_inf(self) -> int:
        return max(abs(self.re), abs(self.im))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


class GaussianRational:
    """An exact element of Q(i).

    Canonical form: the real and imaginary parts are reduced fractions, so two
    constructions of the same value compare (and hash) equal.  ``num``/``den``
    present it as a Gaussian-integer numerator over a positive real-integer
    denominator.
    """

    __slots__ = ("re", "im")

    def __init__(self, num=0, den=1) -> None:
        if isinstance(num, GaussianRational) and den == 1:
            re, im = num.re, num.im
        elif isinstance(den, (int, Fraction)) and not isinstance(num, GaussianRational):
            if den == 0:
                raise ZeroDivisionError("GaussianRational with zero denominator")
            if isinstance(num, (int, Fraction)):
                re, im = Fraction(num) / den, Fraction(0)
            else:
                n = GaussianInt.coerce(num)
                re, im = Fraction(n.re, 1) / den, Fraction(n.im, 1) / den
        else:
            q = as_rational(num) / as_rational(den)
            re, im = q.re, q.im
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def from_parts(cls, re, im) -> GaussianRational:
        out = object.__new__(cls)
        object.__setattr__(out, "re", Fraction(re))
        object.__setattr__(out, "im", Fraction(im))
        return out

    @property
    def den(self) -> GaussianInt:
        return GaussianInt(lcm(self.re.denominator, self.im.denominator), 0)

    @property
    def num(self) -> GaussianInt:
        d = self.den.re
        return GaussianInt(self.re.numerator * (d // self.re.denominator),
                           self.im.numerator * (d // self.im.denominator))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re} {'+' if self.im >= 0 else '-'} {abs(self.im)}i)"

    def __eq__(self, other) -> bool:
        if isinstance(other, (GaussianRational, GaussianInt, int, Fraction)):
            o = as_rational(other)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __neg__(self) -> GaussianRational:
        return GaussianRational.from_parts(-self.re, -self.im)

    def __add__(self, other) -> GaussianRational:
        o = as_rational(other)
        return GaussianRational.from_parts(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> GaussianRational:
        o = as_rational(other)
        return GaussianRational.from_parts(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> GaussianRational:
        return as_rational(other) - self

    def __mul__(self, other) -> GaussianRational:
        o = as_rational(other)
        return GaussianRational.from_parts(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def reciprocal(self) -> GaussianRational:
        n = self.abs_sq()
        if n == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return GaussianRational.from_parts(self.re / n, -self.im / n)

    def __truediv__(self, other) -> GaussianRational:
        return self * as_rational(other).reciprocal()

    def __rtruediv__(self, other) -> GaussianRational:
        return as_rational(other) * self.reciprocal()

    def conj(self) -> GaussianRational:
        return GaussianRational.from_parts(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def norm_inf(self) -> Fraction:
        return max(abs(self.re), abs(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


Number = Union[int, Fraction, GaussianInt, GaussianRational]


def as_rational(z) -> GaussianRational:
    if isinstance(z, GaussianRational):
        return z
    if isinstance(z, GaussianInt):
        return GaussianRational.from_parts(z.re, z.im)
    if isinstance(z, (int, Fraction)):
        return GaussianRational.from_parts(z, 0)
    if isinstance(z, (tuple, list)) and len(z) == 2:
        return GaussianRational.from_parts(Fraction(z[0]), Fraction(z[1]))
    raise TypeError(f"cannot interpret {z!r} as a Gaussian rational")


def _round_half_up(x: Fraction) -> int:
    # floor(x + 1/2) without building a new Fraction
    p, q = x.numerator, x.denominator
    return (2 * p + q) // (2 * q)


def hurwitz_floor(z: Number) -> GaussianInt:
    """Nearest Gaussian integer, ties rounded toward +inf in each coordinate.

    ``z - hurwitz_floor(z)`` always lies in the half-open box
    ``[-1/2, 1/2) x [-1/2, 1/2)``.
    """
    if isinstance(z, GaussianInt):
        return z
    q = as_rational(z)
    return GaussianInt(_round_half_up(q.re), _round_half_up(q.im))


def norm_inf(z: Number) -> Fraction:
    q = as_rational(z)
    return q.norm_inf()


def abs_sq(z: Number) -> Fraction:
    q = as_rational(z)
    return q.abs_sq()


def in_U(z: Number) -> bool:
    """Membership in the half-open unit box U."""
    q = as_rational(z)
    return -HALF <= q.re < HALF and -HALF <= q.im < HALF


def in_closed_U(z: Number) -> bool:
    q = as_rational(z)
    return abs(q.re) <= HALF and abs(q.im) <= HALF
