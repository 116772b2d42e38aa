"""Hurwitz continued-fraction expansion, convergents and reconstruction."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import EmptySequence, InadmissibleDigit, InputOutsideU, ZeroInput
from .gaussian import GaussianInt, GaussianRational, as_rational, hurwitz_floor, in_U

__all__ = [
    "DigitClass",
    "Digit",
    "DigitSequence",
    "ConvergentPair",
    "digit_class",
    "is_d1",
    "is_d2",
    "expand",
    "convergents",
    "reconstruct",
    "region_of",
    "DEFAULT_MAX_DIGITS",
]

DEFAULT_MAX_DIGITS = 64


class DigitClass(str, enum.Enum):
    D1_ONLY = "D1_only"
    D2 = "D2"


def is_d1(g: GaussianInt) -> bool:
    return g.norm_sq() >= 2


def is_d2(g: GaussianInt) -> bool:
    return g.norm_sq() >= 8


def digit_class(g: GaussianInt) -> DigitClass:
    if not is_d1(g):
        raise InadmissibleDigit(f"{g} has norm_sq < 2")
    return DigitClass.D2 if is_d2(g) else DigitClass.D1_ONLY


@dataclass(frozen=True)
class Digit:
    value: GaussianInt
    cls: DigitClass

    @classmethod
    def of(cls, g: GaussianInt) -> Digit:
        return cls(g, digit_class(g))


@dataclass(frozen=True)
class DigitSequence:
    """A finite word of Hurwitz digits.

    ``exhausted`` is set when the expansion that produced the word reached an
    exact zero remainder, i.e. the word is the complete expansion of a
    Gaussian rational.
    """

    digits: tuple[GaussianInt, ...] = ()
    exhausted: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "digits", tuple(GaussianInt.coerce(d) for d in self.digits)
        )

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, item):
        return self.digits[item]

    def prefix(self, n: int) -> DigitSequence:
        return DigitSequence(self.digits[:n])

    def is_d2(self) -> bool:
        return all(is_d2(d) for d in self.digits)


@dataclass(frozen=True)
class ConvergentPair:
    p: GaussianInt
    q: GaussianInt
    index: int

    def value(self) -> GaussianRational:
        return GaussianRational(self.p, self.q)


def _digits_of(digits) -> tuple[GaussianInt, ...]:
    if isinstance(digits, DigitSequence):
        return digits.digits
    return tuple(GaussianInt.coerce(d) for d in digits)


def expand(z, max_digits: int = DEFAULT_MAX_DIGITS) -> DigitSequence:
    """Hurwitz digits of an exact Gaussian rational ``z`` in U.

    Iterates z -> 1/z - [1/z] until the remainder is exactly zero or
    ``max_digits`` digits have been produced.
    """
    q = as_rational(z)
    if not in_U(q):
        raise InputOutsideU(f"{q!r} is not in U")
    if not q:
        raise ZeroInput("0 has no Hurwitz digits")

    # remainder = (a + b i) / d with d > 0, all integers
    d = q.den.re
    num = q.num
    a, b = num.re, num.im
    out: list[GaussianInt] = []
    while len(out) < max_digits:
        # 1/remainder = d (a - b i) / (a^2 + b^2)
        n = a * a + b * b
        x, y = d * a, -d * b
        g = gcd(gcd(x, y), n)
        if g > 1:
            x, y, n = x // g, y // g, n // g
        cr = (2 * x + n) // (2 * n)
        ci = (2 * y + n) // (2 * n)
        out.append(GaussianInt(cr, ci))
        a, b, d = x - cr * n, y - ci * n, n
        if a == 0 and b == 0:
            return DigitSequence(tuple(out), exhausted=True)
    return DigitSequence(tuple(out), exhausted=False)


def convergents(digits) -> list[ConvergentPair]:
    """Exact convergents (p_j, q_j), j = 1..n, from the three-term recursion."""
    ds = _digits_of(digits)
    if not ds:
        raise EmptySequence("no digits")
    p_prev, p = GaussianInt(1), GaussianInt(0)
    q_prev, q = GaussianInt(0), GaussianInt(1)
    out = []
    for j, c in enumerate(ds, start=1):
        p_prev, p = p, c * p + p_prev
        q_prev, q = q, c * q + q_prev
        out.append(ConvergentPair(p, q, j))
    return out


def last_two_convergents(digits) -> tuple[GaussianInt, GaussianInt, GaussianInt, GaussianInt]:
    """(p_{n-1}, p_n, q_{n-1}, q_n) without materialising the whole list."""
    ds = _digits_of(digits)
    pr, pi_, p0r, p0i = 1, 0, 0, 0
    qr, qi, q0r, q0i = 0, 0, 1, 0
    # (pr + pi_ i) is p_{j-1}, (p0r + p0i i) is p_j
    for c in ds:
        cr, ci = c.re, c.im
        pr, pi_, p0r, p0i = p0r, p0i, cr * p0r - ci * p0i + pr, cr * p0i + ci * p0r + pi_
        qr, qi, q0r, q0i = q0r, q0i, cr * q0r - ci * q0i + qr, cr * q0i + ci * q0r + qi
    return (GaussianInt(pr, pi_), GaussianInt(p0r, p0i),
            GaussianInt(qr, qi), GaussianInt(q0r, q0i))


def reconstruct(digits) -> GaussianRational:
    """Value p_n/q_n of the finite continued fraction 1/(c_1 + 1/(c_2 + ...))."""
    ds = _digits_of(digits)
    if not ds:
        raise EmptySequence("no digits")
    for c in ds:
        if not is_d1(c):
            raise InadmissibleDigit(f"{c} has norm_sq < 2")
    _, p, _, q = last_two_convergents(ds)
    return GaussianRational(p, q)


def region_of(z) -> Digit:
    """The index i in D1 with z in U_i, i.e. the first Hurwitz digit of z."""
    q = as_rational(z)
    if not in_U(q):
        raise InputOutsideU(f"{q!r} is not in U")
    if not q:
        raise ZeroInput("0 lies in no region U_i")
    return Digit.of(hurwitz_floor(q.reciprocal()))


def word_from_pairs(pairs: Iterable[Sequence[int]], exhausted: bool = False) -> DigitSequence:
    return DigitSequence(tuple(GaussianInt(a, b) for a, b in pairs), exhausted)
