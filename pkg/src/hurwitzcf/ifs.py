"""The iterated function system {phi_i(x) = 1/(x + i) : i in D2} on the closed box.

Diameter bounds for cylinders are kept in the natural-log domain and evaluated
with outward-rounded interval arithmetic, then rounded outward once more when
converted to double.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import iv, libmp

from . import _streams
from .errors import EmptySequence, InadmissibleDigit, InputOutsideClosedU
from .gaussian import GaussianInt, GaussianRational, as_rational, in_closed_U
from .hurwitz import (
    ConvergentPair,
    DigitSequence,
    is_d2,
    last_two_convergents,
    region_of,
)
from .errors import HurwitzError

__all__ = [
    "DEFAULT_PREC",
    "RHO",
    "C1",
    "C2",
    "CylinderInfo",
    "DerivedConstants",
    "apply_map",
    "apply_word",
    "mobius_apply",
    "derivative_bound",
    "derivative_sq",
    "cylinder",
    "derived_constants",
    "verify_ifs_properties",
    "log_cylinder_lower",
    "log_cylinder_upper",
    "sampled_log_diameter",
    "log_abs_fraction",
]

DEFAULT_PREC = 96
HALF = Fraction(1, 2)

# sharp box constants: sup |D phi_i| over D2 and the 2-decay pair
RHO = Fraction(2, 9)
C1 = Fraction(16, 25)
C2 = Fraction(16, 9)

CORNERS = tuple(
    GaussianRational.from_parts(a, b)
    for a in (-HALF, HALF)
    for b in (-HALF, HALF)
)


def _check_index(i: GaussianInt) -> GaussianInt:
    i = GaussianInt.coerce(i)
    if not is_d2(i):
        raise InadmissibleDigit(f"{i} is not in D2 (norm_sq = {i.norm_sq()} < 8)")
    return i


def apply_map(i, x) -> GaussianRational:
    i = _check_index(i)
    x = as_rational(x)
    if not in_closed_U(x):
        raise InputOutsideClosedU(f"{x!r} is outside the closed box")
    return (x + i).reciprocal()


def apply_word(word, x) -> GaussianRational:
    """phi_{w1} o ... o phi_{wn} (x), innermost map applied first."""
    digits = word.digits if isinstance(word, DigitSequence) else tuple(word)
    digits = tuple(_check_index(d) for d in digits)
    x = as_rational(x)
    if not in_closed_U(x):
        raise InputOutsideClosedU(f"{x!r} is outside the closed box")
    for d in reversed(digits):
        x = (x + d).reciprocal()
    return x


def mobius_apply(word, x) -> GaussianRational:
    """Same value as :func:`apply_word`, via (p_n + p_{n-1} x) / (q_n + q_{n-1} x)."""
    p1, p, q1, q = last_two_convergents(word)
    x = as_rational(x)
    return (x * p1 + p) / (x * q1 + q)


def _box_distance_sq(i: GaussianInt) -> tuple[Fraction, Fraction]:
    """Exact min and max of |x + i|^2 over the closed box."""
    lo = []
    hi = []
    for c in (i.re, i.im):
        c = Fraction(c)
        # x ranges over [-1/2, 1/2]; |x + c| attains its extremes at a clamp / endpoint
        near = min(abs(c - HALF), abs(c + HALF)) if abs(c) >= HALF else Fraction(0)
        far = max(abs(c - HALF), abs(c + HALF))
        lo.append(near * near)
        hi.append(far * far)
    return lo[0] + lo[1], hi[0] + hi[1]


def derivative_bound(i) -> tuple[Fraction, Fraction]:
    """Exact range (lo, hi) of |D phi_i(x)|^2 = 1/|x+i|^4 over the closed box."""
    i = _check_index(i)
    dmin, dmax = _box_distance_sq(i)
    return 1 / (dmax * dmax), 1 / (dmin * dmin)


def derivative_sq(i, x) -> Fraction:
    """|D phi_i(x)|^2, exactly."""
    d = (as_rational(x) + GaussianInt.coerce(i)).abs_sq()
    return 1 / (d * d)


@dataclass(frozen=True)
class DerivedConstants:
    gamma: float
    gamma_lower: Fraction
    xi: complex
    rho: Fraction
    c1: Fraction
    c2: Fraction

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "xi": [self.xi.real, self.xi.imag],
            "rho": str(self.rho),
            "c1": str(self.c1),
            "c2": str(self.c2),
        }


@lru_cache(maxsize=None)
def derived_constants() -> DerivedConstants:
    with mpmath.workprec(200):
        c = mpmath.mpc(3, 4)
        disc = mpmath.sqrt(c * c + 4)
        roots = [(-c + disc) / 2, (-c - disc) / 2]
        inside = [r for r in roots if -0.5 <= r.real < 0.5 and -0.5 <= r.imag < 0.5]
        if len(inside) != 1:
            raise AssertionError(f"expected exactly one root in U, got {inside}")
        xi = inside[0]
        g = 2 * abs(xi) / (abs(xi) + 1) ** 2
        # 12 significant digits, rounded down: gamma only feeds lower bounds
        exp10 = int(mpmath.floor(mpmath.log10(g)))
        scale = 10 ** (11 - exp10)
        gamma_lower = Fraction(int(mpmath.floor(g * scale)), scale)
        xi_c = complex(xi)

    # rho: the D2 index closest to the box is 2+2i (up to symmetry); every index
    # with norm_sq > 18 is at distance > 5/2 * sqrt(2) from it
    best = max(
        derivative_bound(GaussianInt(a, b))[1]
        for a in range(-5, 6)
        for b in range(-5, 6)
        if 8 <= a * a + b * b <= 18
    )
    rho = _exact_sqrt(best)
    return DerivedConstants(float(gamma_lower), gamma_lower, xi_c, rho, C1, C2)


def _exact_sqrt(x: Fraction) -> Fraction:
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if Fraction(n * n, d * d) != x:
        raise ValueError(f"{x} is not a rational square")
    return Fraction(n, d)


# ---------------------------------------------------------------- log domain


@contextmanager
def _iv_prec(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _iv_frac(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _float_down(ivx) -> float:
    return libmp.to_float(ivx._mpi_[0], rnd="f")


def _float_up(ivx) -> float:
    return libmp.to_float(ivx._mpi_[1], rnd="c")


def _sum_log_abs_pm(digits, sign: int, prec: int):
    """Interval enclosure of sum_j log(|c_j| + sign)."""
    total = iv.mpf(0)
    for c in digits:
        total += iv.log(iv.sqrt(iv.mpf(c.norm_sq())) + sign)
    return total


def log_cylinder_lower(digits, *, prec: int = DEFAULT_PREC, gamma: Fraction | None = None) -> float:
    """Rounded-down value of log(gamma) - 2 sum log(|c_j| + 1)."""
    g = derived_constants().gamma_lower if gamma is None else Fraction(gamma)
    with _iv_prec(prec):
        val = iv.log(_iv_frac(g)) - 2 * _sum_log_abs_pm(digits, 1, prec)
        return _float_down(val)


def log_cylinder_upper(digits, *, prec: int = DEFAULT_PREC) -> float:
    """Rounded-up value of log 2 - 2 sum log(|c_j| - 1)."""
    with _iv_prec(prec):
        val = iv.log(iv.mpf(2)) - 2 * _sum_log_abs_pm(digits, -1, prec)
        return _float_up(val)


@dataclass(frozen=True)
class CylinderInfo:
    word: DigitSequence
    center: ConvergentPair
    log_diam_lo: float
    log_diam_hi: float

    @property
    def center_value(self) -> GaussianRational:
        return self.center.value()


def cylinder(word, *, prec: int = DEFAULT_PREC, gamma: Fraction | None = None) -> CylinderInfo:
    """Exact center p_n/q_n and log-domain diameter bounds of phi_word(closed U)."""
    if not isinstance(word, DigitSequence):
        word = DigitSequence(tuple(word))
    if not len(word):
        raise EmptySequence("cylinder of the empty word")
    for d in word:
        _check_index(d)
    _, p, _, q = last_two_convergents(word)
    lo = log_cylinder_lower(word.digits, prec=prec, gamma=gamma)
    hi = log_cylinder_upper(word.digits, prec=prec)
    return CylinderInfo(word, ConvergentPair(p, q, len(word)), lo, hi)


def log_abs_fraction(x: Fraction) -> float:
    """log|x| for an exact nonzero rational of any size."""
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def sampled_log_diameter(word) -> float:
    """log of the max pairwise distance among images of 0 and the box corners.

    A lower estimate of the true cylinder diameter, computed exactly and only
    converted to a logarithm at the end.
    """
    pts = [mobius_apply(word, GaussianRational())] + [mobius_apply(word, v) for v in CORNERS]
    best = Fraction(0)
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            d = (pts[a] - pts[b]).abs_sq()
            if d > best:
                best = d
    return log_abs_fraction(best) / 2


# ---------------------------------------------------------------- verifier

_X_DEN = 1 << 21


def _sample_point(rng) -> GaussianRational:
    h = _X_DEN // 2
    return GaussianRational.from_parts(
        Fraction(rng.randrange(-h, h), _X_DEN), Fraction(rng.randrange(-h, h), _X_DEN)
    )


def _sample_index(rng, max_abs: int) -> GaussianInt:
    while True:
        a = rng.randint(-max_abs, max_abs)
        b = rng.randint(-max_abs, max_abs)
        if 8 <= a * a + b * b <= max_abs * max_abs:
            return GaussianInt(a, b)


def _ifs_chunk(seed: int, n: int, max_abs: int, max_depth: int, extra: tuple):
    rng = _streams.py_rng(seed)
    consts = derived_constants()
    rho_sq = consts.rho * consts.rho
    out = {
        "open": [True, None, 0],
        "contract": [True, None, None],
        "decay": [True, None, None],
        "iso": [True, None, None],
    }
    extra = tuple(GaussianInt.coerce(e) for e in extra)
    for k in range(n):
        i = extra[k % len(extra)] if extra and k % 2 else _sample_index(rng, max_abs)
        x = _sample_point(rng)
        nsq = i.norm_sq()

        # open set: phi_i(x) must land in U_i and nowhere else
        z = (x + i).reciprocal()
        try:
            ok = region_of(z).value == i
        except HurwitzError:
            ok = False
        out["open"][2] += 1
        if not ok and out["open"][0]:
            out["open"][0] = False
            out["open"][1] = {"index": [i.re, i.im], "x": [str(x.re), str(x.im)]}

        dsq = derivative_sq(i, x)
        # contraction: margin rho - |D phi|, tracked in the squared domain
        m3 = float(rho_sq - dsq)
        if out["contract"][2] is None or m3 < out["contract"][2]:
            out["contract"][2] = m3
            out["contract"][1] = {"index": [i.re, i.im], "x": [str(x.re), str(x.im)], "deriv": math.sqrt(float(dsq))}
        if dsq > rho_sq:
            out["contract"][0] = False

        # 2-decay: C1/|i|^2 <= |D phi| <= C2/|i|^2, compared squared
        lo = consts.c1 * consts.c1 / (nsq * nsq)
        hi = consts.c2 * consts.c2 / (nsq * nsq)
        m4 = float(min(dsq / lo, hi / dsq)) - 1.0
        if out["decay"][2] is None or m4 < out["decay"][2]:
            out["decay"][2] = m4
            out["decay"][1] = {"index": [i.re, i.im], "x": [str(x.re), str(x.im)]}
        if not (lo <= dsq <= hi):
            out["decay"][0] = False

        # isolation: cylinder centres stay away from the boundary of U
        depth = rng.randint(1, max_depth)
        word = [_sample_index(rng, max_abs) for _ in range(depth)]
        c = mobius_apply(word, GaussianRational())
        m5 = HALF - c.norm_inf()
        if out["iso"][2] is None or m5 < out["iso"][2]:
            out["iso"][2] = m5
            out["iso"][1] = {"word": [[d.re, d.im] for d in word]}
        if m5 <= 0:
            out["iso"][0] = False
    return out


def verify_ifs_properties(
    samples: int,
    seed: int = 0,
    *,
    max_abs: int = 30,
    max_depth: int = 6,
    extra_indices=(),
    threads: int | None = 1,
) -> dict:
    """Sampled checks of the open set condition, contraction, 2-decay and isolation.

    ``extra_indices`` injects indices (possibly outside D2) into every other
    sample; it exists for negative controls.
    """
    sizes = _streams.chunk_sizes(samples)
    seeds = _streams.child_seeds(seed, len(sizes))
    extra = tuple(tuple(GaussianInt.coerce(e)) for e in extra_indices)
    parts = _streams.pmap(
        _ifs_chunk,
        [(s, n, max_abs, max_depth, extra) for s, n in zip(seeds, sizes)],
        threads,
    )
    merged = {"open": [True, None, 0], "contract": [True, None, None], "decay": [True, None, None], "iso": [True, None, None]}
    for part in parts:
        for key in ("contract", "decay", "iso"):
            ok, wit, margin = part[key]
            if margin is not None and (merged[key][2] is None or margin < merged[key][2]):
                merged[key][1], merged[key][2] = wit, margin
            merged[key][0] &= ok
        merged["open"][0] &= part["open"][0]
        merged["open"][2] += part["open"][2]
        if merged["open"][1] is None:
            merged["open"][1] = part["open"][1]

    def prop(key, margin):
        ok, wit, _ = merged[key]
        return {"pass": ok, "worst_witness": wit, "margin": margin}

    v_margin = merged["iso"][2]
    report = {
        "format": 1,
        "samples": samples,
        "seed": seed,
        "properties": {
            "open_set": prop("open", None),
            "conformality": {"pass": None, "worst_witness": None, "margin": None,
                                "note": "analytic property; not checked numerically"},
            "contraction": prop("contract", merged["contract"][2]),
            "two_decay": prop("decay", merged["decay"][2]),
            "isolation": prop("iso", None if v_margin is None else float(v_margin)),
        },
        "constants": derived_constants().as_dict(),
    }
    report["pass"] = all(
        p["pass"] is not False for p in report["properties"].values()
    )
    return report
