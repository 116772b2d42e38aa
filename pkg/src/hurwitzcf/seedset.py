"""Seed-set digit shells, the insertion schedule, the integer squares W_k and
the insert / eliminate maps between seed words and modified words."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from mpmath import iv

from . import _streams
from .errors import (
    HurwitzError,
    IndexOutOfSchedule,
    NotInImage,
    NotSeedWord,
    ScheduleInfeasible,
    ScheduleTooShort,
)
from .gaussian import GaussianInt
from .hurwitz import DigitSequence

__all__ = [
    "T",
    "shell_bounds",
    "in_shell",
    "shell_members",
    "shell_array",
    "shell_cardinality",
    "is_seed_word",
    "sample_seed_word",
    "sample_shell_digits",
    "word_weight",
    "InsertionSchedule",
    "make_schedule",
    "check_schedule",
    "level_condition_holds",
    "IntegerSquare",
    "square",
    "insert",
    "eliminate",
    "insertion_cost_margins",
]

T = 3


def shell_bounds(n: int) -> tuple[int, int]:
    """(t^n, 2 t^n): members have t^n <= ||i||_inf < 2 t^n."""
    if n < 1:
        raise HurwitzError(f"shell level must be >= 1, got {n}")
    lo = T**n
    return lo, 2 * lo


def in_shell(g: GaussianInt, n: int) -> bool:
    lo, hi = shell_bounds(n)
    return lo <= g.norm_inf() < hi


def shell_members(n: int) -> Iterator[GaussianInt]:
    lo, hi = shell_bounds(n)
    for k in range(-hi + 1, hi):
        if abs(k) >= lo:
            for l in range(-hi + 1, hi):
                yield GaussianInt(k, l)
        else:
            for l in range(-hi + 1, -lo + 1):
                yield GaussianInt(k, l)
            for l in range(lo, hi):
                yield GaussianInt(k, l)


def shell_array(n: int) -> np.ndarray:
    """Shell members as an (N, 2) int64 array, same order as :func:`shell_members`."""
    lo, hi = shell_bounds(n)
    r = np.arange(-hi + 1, hi, dtype=np.int64)
    k, l = np.meshgrid(r, r, indexing="ij")
    mask = np.maximum(np.abs(k), np.abs(l)) >= lo
    return np.stack([k[mask], l[mask]], axis=1)


def shell_cardinality(n: int) -> int:
    lo, _ = shell_bounds(n)
    return 12 * lo * lo - 4 * lo


def is_seed_word(word) -> bool:
    return all(in_shell(GaussianInt.coerce(d), j) for j, d in enumerate(word, start=1))


def _draw_shell(rng, n: int) -> GaussianInt:
    lo, hi = shell_bounds(n)
    # rejection from the outer box is exactly uniform on the shell
    while True:
        a = rng.randrange(-hi + 1, hi)
        b = rng.randrange(-hi + 1, hi)
        if max(abs(a), abs(b)) >= lo:
            return GaussianInt(a, b)


def sample_seed_word(depth: int, seed: int = 0, *, start: int = 1) -> DigitSequence:
    """Digit j drawn uniformly from shell j, independently: the depth-``depth``
    marginal of the product measure on the seed set."""
    rng = _streams.py_rng(seed)
    return DigitSequence(tuple(_draw_shell(rng, j) for j in range(start, start + depth)))


def sample_shell_digits(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    """Vectorised uniform draws from shell n as complex128 (small n only)."""
    lo, hi = shell_bounds(n)
    out = np.empty(size, dtype=np.complex128)
    filled = 0
    while filled < size:
        m = int((size - filled) * 1.4) + 16
        ab = rng.integers(-hi + 1, hi, size=(m, 2))
        ok = np.maximum(np.abs(ab[:, 0]), np.abs(ab[:, 1])) >= lo
        ab = ab[ok][: size - filled]
        out[filled:filled + len(ab)] = ab[:, 0] + 1j * ab[:, 1]
        filled += len(ab)
    return out


def word_weight(word) -> float:
    """log mu([word]) = -sum_j log #I^(j); -inf if the word is not a seed word."""
    if not is_seed_word(word):
        return -math.inf
    return -sum(math.log(shell_cardinality(j)) for j in range(1, len(word) + 1))


# ---------------------------------------------------------------- schedule


def _exact_eps(epsilon) -> Fraction:
    if isinstance(epsilon, Fraction):
        return epsilon
    # decimal reading: 0.1 means 1/10, not the binary double nearest to it
    return Fraction(str(epsilon))


@dataclass(frozen=True)
class InsertionSchedule:
    epsilon: Fraction
    levels: tuple[int, ...]
    verified_to: int
    t: int = T
    report: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _exact_eps(self.epsilon))
        object.__setattr__(self, "levels", tuple(int(n) for n in self.levels))

    @property
    def horizon(self) -> int:
        return len(self.levels)

    def side(self, k: int) -> int:
        """Side length of W_k: the number of offsets a >= 0 with a <= sqrt(eps n_k) - 1."""
        n = self.levels[k - 1]
        return math.isqrt(math.floor(self.epsilon * n))


def _level_poly(n: int, eps: Fraction) -> Fraction:
    # log_t of the inequality with the sqrt(2) factors moved right:
    # (1+5e) n(n-1) - (n+1)(n+4)/2 - 2 e n^2  >=  (n+1)/2 * log_t 2
    return (1 + 5 * eps) * n * (n - 1) - Fraction((n + 1) * (n + 4), 2) - 2 * eps * n * n


def level_condition_holds(n: int, eps) -> bool:
    """Exact check of the level condition at level n.

    With R = the rational left side, the condition R >= (n+1)/2 log_3 2 is
    3^(2R) >= 2^(n+1), decided with integers after clearing R's denominator.
    """
    eps = _exact_eps(eps)
    r = _level_poly(n, eps)
    if r < 0:
        return False
    return 3 ** (2 * r.numerator) >= 2 ** ((n + 1) * r.denominator)


def _level_tail_certified(n: int, eps: Fraction) -> bool:
    # g(m) = R(m) - (m+1)/2 log_3 2 is a quadratic with leading coefficient 1/2 + 3e > 0;
    # g(n) >= 0 and g'(n) >= 0 give g >= 0 for every m >= n
    lead = Fraction(1, 2) + 3 * eps
    lin = -(1 + 5 * eps) - Fraction(5, 2)
    slope_log = iv.log(iv.mpf(2)) / iv.log(iv.mpf(3)) / 2
    deriv = iv.mpf(2 * lead.numerator) / lead.denominator * n + iv.mpf(lin.numerator) / lin.denominator - slope_log
    return level_condition_holds(n, eps) and deriv.a >= 0


def _shell_gap_ok(n: int, eps: Fraction) -> bool:
    # t^(n+1) > 2 t^n + sqrt(2 e n)  <=>  t^n > sqrt(2 e n)  <=>  t^(2n) > 2 e n
    return T ** (2 * n) > 2 * eps * n


def _square_budget_ok(levels, eps: Fraction) -> list[bool]:
    acc = Fraction(0)
    out = []
    for n in levels:
        acc += eps * n * (n + 2)
        out.append(acc <= 2 * eps * n * n)
    return out


def _level_products(n: int, eps: Fraction) -> bool:
    """The level condition evaluated literally as log-products, in interval arithmetic.

    Falls back to the exact integer decision only when the interval comparison
    is inconclusive.
    """
    e = iv.mpf(eps.numerator) / eps.denominator
    log_t = iv.log(iv.mpf(T))
    lhs = iv.mpf(0)
    for j in range(1, n + 2):
        lhs -= iv.log(iv.sqrt(iv.mpf(2))) + (j + 1) * log_t
    lhs -= 2 * e * n * n * log_t
    rhs = iv.mpf(0)
    for j in range(1, n + 1):
        rhs -= 2 * (j - 1) * log_t
    rhs *= 1 + 5 * e
    if lhs.a >= rhs.b:
        return True
    if lhs.b < rhs.a:
        return False
    return level_condition_holds(n, eps)


def check_schedule(schedule: InsertionSchedule) -> dict:
    """Independent re-validation of the shell-gap, square-budget and level conditions."""
    eps = schedule.epsilon
    levels = schedule.levels
    if eps <= 0:
        return {"pass": False, "reason": "epsilon must be positive"}
    inc = all(a < b for a, b in zip(levels, levels[1:])) and bool(levels) and levels[0] >= 1
    h1 = [_shell_gap_ok(n, eps) for n in levels]
    h2 = _square_budget_ok(levels, eps)
    lo = levels[0] if levels else 1
    eq = {n: _level_products(n, eps) for n in range(lo, schedule.verified_to + 1)}
    tail = _level_tail_certified(schedule.verified_to, eps) if levels else False
    return {
        "pass": inc and all(h1) and all(h2) and all(eq.values()),
        "strictly_increasing": inc,
        "shell_gap": h1,
        "square_budget": h2,
        "level_range": [lo, schedule.verified_to],
        "level_failures": [n for n, ok in eq.items() if not ok],
        "level_tail_certified": tail,
        "leading_coefficients": {"rhs": str(1 + 5 * eps), "lhs": str(Fraction(1, 2) + 2 * eps)},
    }


def make_schedule(epsilon, horizon: int, verify_to: int | None = None, *, scan_limit: int = 100_000) -> InsertionSchedule:
    """Minimal first level n_1 for the level condition, then doubling n_k = 2 n_(k-1)."""
    eps = _exact_eps(epsilon)
    if eps <= 0:
        raise HurwitzError("epsilon must be positive")
    if horizon < 1:
        raise HurwitzError("horizon must be >= 1")

    # the set where the quadratic is nonnegative is an up-set in n once past its
    # larger root, so the first hit of a scan that stays true to verify_to is minimal
    n1 = None
    for n in range(1, scan_limit):
        if level_condition_holds(n, eps):
            n1 = n
            break
    if n1 is None:
        raise ScheduleInfeasible(f"no level below {scan_limit} satisfies the level condition")
    top = 10 * n1 if verify_to is None else verify_to
    bad = [n for n in range(n1, top + 1) if not level_condition_holds(n, eps)]
    if bad:
        raise ScheduleInfeasible(f"level condition fails at levels {bad[:5]}")

    levels = [n1]
    while len(levels) < horizon:
        levels.append(2 * levels[-1])
    sched = InsertionSchedule(eps, tuple(levels), top)
    report = check_schedule(sched)
    if not report["pass"]:
        raise ScheduleInfeasible(f"schedule failed verification: {report}")
    object.__setattr__(sched, "report", report)
    return sched


# ---------------------------------------------------------------- squares


@dataclass(frozen=True)
class IntegerSquare:
    """W_k: anchor + {a + b i : 0 <= a, b < side}.  Empty when eps n_k < 1."""

    k: int
    anchor: GaussianInt
    side: int

    def __len__(self) -> int:
        return self.side * self.side

    def __contains__(self, g) -> bool:
        g = GaussianInt.coerce(g)
        a, b = g.re - self.anchor.re, g.im - self.anchor.im
        return 0 <= a < self.side and 0 <= b < self.side

    def __iter__(self) -> Iterator[GaussianInt]:
        # fixed enumeration order: a outer, b inner
        ar, ai = self.anchor.re, self.anchor.im
        for a in range(self.side):
            for b in range(self.side):
                yield GaussianInt(ar + a, ai + b)

    @property
    def points(self) -> list[GaussianInt]:
        return list(self)

    def max_norm_inf(self) -> int:
        return self.anchor.norm_inf() + self.side - 1

    def min_norm_inf(self) -> int:
        return self.anchor.norm_inf()


def square(k: int, schedule: InsertionSchedule) -> IntegerSquare:
    if not 1 <= k <= schedule.horizon:
        raise IndexOutOfSchedule(f"k = {k} outside 1..{schedule.horizon}")
    a = 2 * schedule.t ** schedule.levels[k - 1]
    return IntegerSquare(k, GaussianInt(a, a), schedule.side(k))


def insert(y_digits, schedule: InsertionSchedule) -> DigitSequence:
    """Splice W_k immediately after the n_k-th seed digit, for every n_k <= |y|."""
    y = tuple(GaussianInt.coerce(d) for d in y_digits)
    if not is_seed_word(y):
        raise NotSeedWord("digit j must lie in shell j for every j")
    if y and len(y) > schedule.levels[-1]:
        raise ScheduleTooShort(
            f"word of length {len(y)} exceeds the last scheduled level {schedule.levels[-1]}"
        )
    out: list[GaussianInt] = []
    k = 0
    for j, d in enumerate(y, start=1):
        out.append(d)
        if k < schedule.horizon and schedule.levels[k] == j:
            out.extend(square(k + 1, schedule))
            k += 1
    return DigitSequence(tuple(out))


def eliminate(x_digits, schedule: InsertionSchedule) -> DigitSequence:
    """Inverse of :func:`insert`: drop the spliced square blocks after checking them."""
    x = tuple(GaussianInt.coerce(d) for d in x_digits)
    out: list[GaussianInt] = []
    pos = 0
    k = 0
    while pos < len(x):
        d = x[pos]
        j = len(out) + 1
        if j > schedule.levels[-1]:
            raise NotInImage("word extends beyond the scheduled horizon")
        if not in_shell(d, j):
            raise NotInImage(f"digit {pos + 1} ({d}) is not in shell {j}")
        out.append(d)
        pos += 1
        if k < schedule.horizon and schedule.levels[k] == j:
            block = square(k + 1, schedule).points
            got = x[pos:pos + len(block)]
            if list(got) != block:
                raise NotInImage(f"block W_{k + 1} expected after seed digit {j}")
            pos += len(block)
            k += 1
    return DigitSequence(tuple(out))


def insertion_cost_margins(schedule: InsertionSchedule) -> list[dict]:
    """For q = 1..K: rigorous lower end of sum_{k<=q} sum_{i in W_k} log 1/(|i|+1)
    against the upper end of -2 eps n_q^2 log t."""
    out = []
    total = iv.mpf(0)
    eps = schedule.epsilon
    for q in range(1, schedule.horizon + 1):
        for g in square(q, schedule):
            total -= iv.log(iv.sqrt(iv.mpf(g.norm_sq())) + 1)
        n = schedule.levels[q - 1]
        rhs = -2 * (iv.mpf(eps.numerator) / eps.denominator) * n * n * iv.log(iv.mpf(schedule.t))
        lhs_lo = float(total.a)
        rhs_hi = float(rhs.b)
        out.append({"q": q, "lhs": lhs_lo, "rhs": rhs_hi, "pass": bool(total.a >= rhs.b)})
    return out
