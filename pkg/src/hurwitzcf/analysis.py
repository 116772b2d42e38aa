"""Numerical diagnostics: box counting, mass-distribution exponents, covering
words, the Hoelder diagnostic for the elimination map, and a lemma battery.

Distances between constructed points are never obtained by subtracting
floats: wherever the magnitudes can underflow they are bounded through
log-domain cylinder diameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from mpmath import iv

from . import _streams
from .errors import (
    HurwitzError,
    InsufficientSamples,
    RadiusTooLarge,
    ScaleTooSmall,
    ScheduleUnverified,
)
from .gaussian import GaussianInt, GaussianRational
from .hurwitz import convergents, expand, last_two_convergents, reconstruct
from .ifs import (
    derived_constants,
    log_cylinder_lower,
    log_cylinder_upper,
    sampled_log_diameter,
    verify_ifs_properties,
)
from .patterns import LatticePattern, copies_in_square
from .seedset import (
    T,
    InsertionSchedule,
    check_schedule,
    eliminate,
    insert,
    is_seed_word,
    insertion_cost_margins,
    make_schedule,
    sample_seed_word,
    sample_shell_digits,
    shell_array,
    shell_bounds,
    shell_cardinality,
    shell_members,
    square,
)

__all__ = [
    "BoxCount",
    "PointCloud",
    "DimensionScan",
    "CoverStats",
    "HolderFit",
    "box_count",
    "four_corner_cloud",
    "seed_set_cloud",
    "dimension_scan",
    "mass_distribution_check",
    "r0",
    "cover_words",
    "calibrate_r1",
    "holder_diagnostic",
    "holder_pair_bounds",
    "holder_satisfied",
    "measure_bound_check",
    "sandwich_check",
    "verify_lemmas",
]

DIAM_U = math.sqrt(2.0)


# ---------------------------------------------------------------- box counting


@dataclass(frozen=True)
class BoxCount:
    count: int
    ambiguous: int


@dataclass(frozen=True)
class PointCloud:
    """Sample points with a common enclosure radius: each true point lies
    within ``radius`` of its listed approximation."""

    points: np.ndarray
    radius: float
    label: str = ""


def box_count(points, r: float, radius: float = 0.0, origin: complex = -0.5 - 0.5j) -> BoxCount:
    """Number of r-grid boxes hit by the points; grid anchored at ``origin``.

    Points whose enclosure straddles a grid line are still counted once, by
    their listed position, and tallied in ``ambiguous``.
    """
    pts = np.asarray(points, dtype=np.complex128).ravel()
    if 2 * radius >= r / 10:
        raise ScaleTooSmall(f"enclosure diameter {2 * radius:.3g} is not below r/10 = {r / 10:.3g}")
    if pts.size == 0:
        return BoxCount(0, 0)
    x = (pts.real - origin.real) / r
    y = (pts.imag - origin.imag) / r
    ix = np.floor(x).astype(np.int64)
    iy = np.floor(y).astype(np.int64)
    iy -= iy.min()
    keys = np.unique((ix - ix.min()) * (int(iy.max()) + 1) + iy)
    amb = 0
    if radius > 0:
        rr = radius / r
        amb = int(np.count_nonzero(
            (np.floor(x - rr) != np.floor(x + rr)) | (np.floor(y - rr) != np.floor(y + rr))
        ))
    return BoxCount(int(len(keys)), amb)


def four_corner_cloud(depth: int) -> PointCloud:
    """Centers of the level-``depth`` squares of the ratio-1/4 four-corner IFS
    on the unit square (attractor of dimension exactly 1)."""
    xs = np.zeros(1)
    for k in range(1, depth + 1):
        xs = np.concatenate([xs, xs + 3.0 * 4.0**-k])
    xs = xs + 0.5 * 4.0**-depth
    pts = (xs[:, None] + 1j * xs[None, :]).ravel()
    return PointCloud(pts, math.sqrt(2) / 2 * 4.0**-depth, f"four-corner depth {depth}")


def _seed_points(rng: np.random.Generator, depth: int, size: int) -> np.ndarray:
    digits = [sample_shell_digits(rng, j, size) for j in range(1, depth + 1)]
    z = np.zeros(size, dtype=np.complex128)
    for c in reversed(digits):
        z = 1.0 / (z + c)
    return z


def _seed_truncation_radius(depth: int) -> float:
    # any depth-``depth`` seed cylinder has diameter < 2 prod (3^j - 1)^-2
    return math.exp(math.log(2) - 2 * sum(math.log(T**j - 1) for j in range(1, depth + 1)))


def seed_set_cloud(depth: int, samples: int, seed: int = 0) -> PointCloud:
    rng = np.random.default_rng(seed)
    return PointCloud(_seed_points(rng, depth, samples), _seed_truncation_radius(depth),
                      f"seed set depth {depth}")


@dataclass
class DimensionScan:
    scales: list[float]
    counts: list[int]
    slope: float
    intercept: float
    r_squared: float
    method: str = "boxcount"
    ambiguous: list[int] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["r,count"]
        lines += [f"{r!r},{c}" for r, c in zip(self.scales, self.counts)]
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "format": 1,
            "method": self.method,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": len(self.scales),
        }


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    if len(x) < 2 or np.ptp(x) == 0:
        return 0.0, float(y.mean()) if len(y) else 0.0, 1.0
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def dimension_scan(generator, r_min: float, r_max: float, steps: int = 12) -> DimensionScan:
    """Box counts on a log-spaced grid of scales and the least-squares slope of
    log N(r) against log(1/r)."""
    if not 0 < r_min < r_max:
        raise HurwitzError("need 0 < r_min < r_max")
    cloud = generator() if callable(generator) else generator
    scales = np.geomspace(r_max, r_min, steps)
    counts, amb = [], []
    for r in scales:
        bc = box_count(cloud.points, float(r), cloud.radius)
        counts.append(bc.count)
        amb.append(bc.ambiguous)
    x = np.log(1.0 / scales)
    y = np.log(np.maximum(counts, 1))
    slope, intercept, r2 = _linfit(x, y)
    return DimensionScan([float(s) for s in scales], counts, slope, intercept, r2, "boxcount", amb)


# ---------------------------------------------------------------- mass distribution


def _mass_chunk(seed: int, depth: int, size: int, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng(seed)
    pts = _seed_points(rng, depth, size)
    hits = np.zeros((len(centers), len(radii)), dtype=np.int64)
    for ci, c in enumerate(centers):
        d = np.sort(np.abs(pts - c))
        hits[ci] = np.searchsorted(d, radii, side="left")
    return hits


def mass_distribution_check(
    epsilon: float,
    depth: int,
    samples: int,
    radii: Sequence[float] | None = None,
    *,
    seed: int = 0,
    centers: int = 16,
    min_hits: int = 20,
    tolerance: float = 0.1,
    threads: int | None = 1,
) -> dict:
    """Empirical exponent alpha in mu(B(x, r)) ~ r^alpha for the seed-set measure.

    Centers and mass estimates come from independent streams.  The pooled
    exponent is the within-center (fixed effects) least-squares slope of
    log mu-hat against log r over cells with at least ``min_hits`` hits and
    r below diam(U).
    """
    if samples <= 0:
        raise InsufficientSamples("no samples")
    radii = np.geomspace(1e-3, 1e-1, 9) if radii is None else np.asarray(radii, dtype=float)
    trunc = _seed_truncation_radius(depth)
    if radii.min() <= 100 * trunc:
        raise ScaleTooSmall(f"radius {radii.min():.3g} is within 100x of the truncation error {trunc:.3g}")
    center_seed, *mass_seeds = _streams.child_seeds(seed, 1 + len(_streams.chunk_sizes(samples, 25_000)))
    ctr = _seed_points(np.random.default_rng(center_seed), depth, centers)
    sizes = _streams.chunk_sizes(samples, 25_000)
    parts = _streams.pmap(_mass_chunk, [(s, depth, n, ctr, radii) for s, n in zip(mass_seeds, sizes)], threads)
    hits = np.sum(parts, axis=0)
    frac = hits / samples

    usable = (hits >= min_hits) & (radii[None, :] < DIAM_U)
    xs, ys, per_center = [], [], []
    for ci in range(centers):
        m = usable[ci]
        if m.sum() < 2:
            continue
        lx, ly = np.log(radii[m]), np.log(frac[ci, m])
        per_center.append(_linfit(lx, ly)[0])
        xs.append(lx - lx.mean())
        ys.append(ly - ly.mean())
    if not xs:
        raise InsufficientSamples(f"no center has two radii with >= {min_hits} hits")
    X, Y = np.concatenate(xs), np.concatenate(ys)
    alpha = float((X * Y).sum() / (X * X).sum())
    threshold = 1 - epsilon - tolerance
    return {
        "format": 1,
        "epsilon": epsilon,
        "depth": depth,
        "samples": samples,
        "seed": seed,
        "radii": radii.tolist(),
        "alpha": alpha,
        "alpha_per_center_min": float(min(per_center)),
        "alpha_per_center_median": float(np.median(per_center)),
        "threshold": threshold,
        "pass": alpha >= threshold,
        "cells_used": int(usable.sum()),
        "cells_total": int(usable.size),
        "fractions": frac.tolist(),
    }


# ---------------------------------------------------------------- covering words


def r0() -> Fraction:
    """min over shell 1 of |D phi_i(0)| = 1/|i|^2."""
    _, hi = shell_bounds(1)
    return Fraction(1, 2 * (hi - 1) ** 2)


@dataclass
class CoverStats:
    r: float
    words: list[tuple[GaussianInt, ...]]
    v_count: int
    max_len: int
    count: int
    complete: bool
    length_bound: float
    count_scale: float
    v_words: list[tuple[GaussianInt, ...]] = field(default_factory=list, repr=False)

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "count": self.count,
            "v_count": self.v_count,
            "max_len": self.max_len,
            "complete": self.complete,
            "length_bound": self.length_bound,
            "count_scale": self.count_scale,
        }


_SHELL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _shell_complex(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _SHELL_CACHE:
        a = shell_array(n)
        _SHELL_CACHE[n] = (a, a[:, 0] + 1j * a[:, 1])
    return _SHELL_CACHE[n]


def _exists_small_child(q_prev: GaussianInt, q: GaussianInt, level: int, r: Fraction) -> bool:
    # max |a q + q_prev| over shell ``level`` sits at an outer corner (convexity)
    _, hi = shell_bounds(level)
    m = hi - 1
    for a in (GaussianInt(m, m), GaussianInt(m, -m), GaussianInt(-m, m), GaussianInt(-m, -m)):
        if (a * q + q_prev).norm_sq() * r > 1:
            return True
    return False


def cover_words(word, r: float, *, max_level: int = 5, max_nodes: int = 100_000) -> CoverStats:
    """V(x, r) and its prefix-pruned antichain V*(x, r) for the point x given by a seed word.

    Condition (i) is tested conservatively: a word is kept when
    |x - phi_w(0)| <= r + (diameter upper bound of w) + (error of x).  The
    derivative |D phi_w(0)| equals 1/|q_n|^2 and is compared exactly.
    """
    word = tuple(GaussianInt.coerce(d) for d in word)
    rf = Fraction(r)
    if rf <= 0:
        raise HurwitzError("r must be positive")
    if rf >= r0():
        raise RadiusTooLarge(f"r = {r} is not below r0 = {r0()}")
    if not is_seed_word(word):
        raise HurwitzError("x must be given by a seed word")
    x_err = math.exp(log_cylinder_upper(word))
    _, _, _, qx = last_two_convergents(word)
    if x_err > r / 100 or qx.norm_sq() * rf <= 1:
        raise HurwitzError("seed word too short to locate x at this radius")
    x = reconstruct(word)
    xc = complex(x)

    V: list[tuple[GaussianInt, ...]] = []
    frontier = [((), GaussianInt(1), GaussianInt(0), GaussianInt(0), GaussianInt(1), 2.0)]
    level = 0
    nodes = 0
    complete = True
    while frontier:
        level += 1
        if level > max_level:
            complete = False
            break
        arr, A = _shell_complex(level)
        nxt = []
        for w, p_prev, p, q_prev, q, dh_parent in frontier:
            pc = A * complex(p) + complex(p_prev)
            qc = A * complex(q) + complex(q_prev)
            centers = pc / qc
            dh = dh_parent / (np.abs(A) - 1.0) ** 2
            dist = np.abs(centers - xc)
            qn2 = np.abs(qc) ** 2
            # (ii) needs |q_n|^2 r <= 1; the slack absorbs float rounding
            cand = np.nonzero(
                (dist <= (r + dh + x_err) * (1 + 1e-9) + 1e-15) & (qn2 * r <= 1 + 1e-9)
            )[0]
            for idx in cand:
                a = GaussianInt(int(arr[idx, 0]), int(arr[idx, 1]))
                p2, q2 = a * p + p_prev, a * q + q_prev
                if q2.norm_sq() * rf > 1:
                    # derivative already below r: no descendant satisfies (ii)
                    continue
                child = w + (a,)
                # float diameter bound, inflated well past its accumulated rounding
                bound = Fraction((r + float(dh[idx]) + x_err) * (1 + 1e-9))
                if (x - GaussianRational(p2, q2)).abs_sq() > bound * bound:
                    continue
                nodes += 1
                if _exists_small_child(q, q2, level + 1, rf):
                    V.append(child)
                nxt.append((child, p, p2, q, q2, float(dh[idx])))
            if nodes > max_nodes:
                complete = False
                break
        if not complete:
            break
        frontier = nxt

    vset = set(V)
    vstar = [w for w in V if not any(w[:j] in vset for j in range(1, len(w)))]
    lr = math.log(1 / r)
    return CoverStats(
        r=float(r),
        words=vstar,
        v_count=len(V),
        max_len=max((len(w) for w in V), default=0),
        count=len(vstar),
        complete=complete,
        length_bound=math.sqrt(2 * lr),
        count_scale=T ** (2 * math.sqrt(2 * lr)),
        v_words=V,
    )


def _cover_ok(cs: CoverStats) -> bool:
    antichain = all(
        not (a != b and len(a) < len(b) and b[: len(a)] == a) for a in cs.words for b in cs.words
    )
    return cs.complete and cs.max_len <= cs.length_bound and antichain


def calibrate_r1(words: Sequence, radii: Sequence[float]) -> dict:
    """Largest tested radius below which every tested (x, r) passes the
    length-bound and antichain checks."""
    radii = sorted(radii, reverse=True)
    results = []
    for r in radii:
        stats = [cover_words(w, r) for w in words]
        results.append((r, all(_cover_ok(s) for s in stats), stats))
    r1 = None
    for i, (r, ok, _) in enumerate(results):
        if all(o for _, o, _ in results[i:]):
            r1 = r
            break
    fitted_c = max(
        (s.count / s.count_scale for _, _, stats in results for s in stats), default=0.0
    )
    return {"r1": r1, "fitted_C": fitted_c, "sweep": [(r, ok) for r, ok, _ in results],
            "stats": results}


# ---------------------------------------------------------------- Hoelder diagnostic


@dataclass
class HolderFit:
    epsilon: float
    bound_exponent: float
    fitted_exponent: float
    log_C: float
    log_C_main: float
    pairs: list[tuple[int, float, float]]
    excluded: int
    floor_log_distance: float | None

    @property
    def C(self) -> float:
        return math.exp(self.log_C)

    def summary(self) -> dict:
        return {
            "format": 1,
            "epsilon": self.epsilon,
            "bound_exponent": self.bound_exponent,
            "fitted_exponent": self.fitted_exponent,
            "log_C": self.log_C,
            "log_C_main": self.log_C_main,
            "pairs": len(self.pairs),
            "excluded_split_before_n1": self.excluded,
            "floor_log_distance": self.floor_log_distance,
        }


def _log_abs_pm(g: GaussianInt, sign: int) -> float:
    la = 0.5 * math.log(g.norm_sq())
    return la + math.log1p(sign * math.exp(-la))


def holder_pair_bounds(prefix, a1, a2, schedule: InsertionSchedule,
                       log_gamma: float | None = None) -> tuple[float, float]:
    """(lower bound of log|x1 - x2|, upper bound of log|y1 - y2|) for seed points
    y1, y2 sharing ``prefix`` and then differing as a1 != a2, and their
    insert-images x1, x2."""
    if log_gamma is None:
        log_gamma = math.log(derived_constants().gamma)
    prefix = [GaussianInt.coerce(c) for c in prefix]
    if prefix:
        log_y = math.log(2.0) - 2 * sum(_log_abs_pm(c, -1) for c in prefix)
    else:
        log_y = 0.5 * math.log(2.0)
    xp = insert(prefix, schedule).digits if prefix else ()
    base = sum(_log_abs_pm(c, 1) for c in xp)
    log_x = log_gamma - 2 * (base + max(_log_abs_pm(GaussianInt.coerce(a1), 1),
                                        _log_abs_pm(GaussianInt.coerce(a2), 1)))
    return log_x, log_y


def _holder_chunk(seed: int, n: int, levels: tuple[int, ...], eps: str, log_gamma: float):
    from .seedset import _draw_shell  # local: private helper

    sched = InsertionSchedule(Fraction(eps), levels, levels[-1])
    rng = _streams.py_rng(seed)
    out = []
    top = levels[-1]
    for _ in range(n):
        s = rng.randrange(0, top)
        prefix = [_draw_shell(rng, j) for j in range(1, s + 1)]
        a1 = _draw_shell(rng, s + 1)
        a2 = a1
        while a2 == a1:
            a2 = _draw_shell(rng, s + 1)
        log_x, log_y = holder_pair_bounds(prefix, a1, a2, sched, log_gamma)
        out.append((s, log_x, log_y))
    return out


def holder_diagnostic(
    epsilon,
    schedule: InsertionSchedule,
    pairs: int,
    seed: int = 0,
    *,
    threads: int | None = 1,
) -> HolderFit:
    """Witness constant C with log|y1-y2| <= log|x1-x2| / (1+5 eps) + log C.

    |y1 - y2| is bounded above by the diameter of the common-prefix cylinder;
    |x1 - x2| is estimated from below by the diameter lower bound of the
    cylinder of x's digits through the first differing one.
    """
    report = check_schedule(schedule)
    if not report["pass"]:
        raise ScheduleUnverified(f"schedule does not pass verification: {report}")
    if epsilon is not None and Fraction(str(epsilon)) != schedule.epsilon:
        raise HurwitzError("epsilon does not match the schedule")
    eps = float(schedule.epsilon)
    log_gamma = math.log(derived_constants().gamma)
    sizes = _streams.chunk_sizes(pairs, 250)
    seeds = _streams.child_seeds(seed, len(sizes))
    parts = _streams.pmap(
        _holder_chunk,
        [(sd, n, schedule.levels, str(schedule.epsilon), log_gamma) for sd, n in zip(seeds, sizes)],
        threads,
    )
    data = [p for part in parts for p in part]
    return _fit_holder(eps, schedule.levels[0], data)


def _fit_holder(eps: float, n1: int, data) -> HolderFit:
    b = 1.0 / (1.0 + 5.0 * eps)
    main = [(s, lx, ly) for s, lx, ly in data if s >= n1]
    branch = [(s, lx, ly) for s, lx, ly in data if s < n1]
    if main:
        lx = np.array([d[1] for d in main])
        ly = np.array([d[2] for d in main])
        fitted = _linfit(lx, ly)[0]
        log_c_main = float(np.max(ly - b * lx))
    else:
        fitted, log_c_main = float("nan"), -math.inf
    floor = min((d[1] for d in branch), default=None)
    log_c_all = max((ly - b * lx for _, lx, ly in data), default=-math.inf)
    return HolderFit(eps, b, float(fitted), float(log_c_all), log_c_main, list(data), len(branch), floor)


def holder_satisfied(fit: HolderFit, data) -> float:
    """Fraction of (s, log_x, log_y) triples obeying the fitted inequality."""
    if not data:
        return 1.0
    ok = sum(1 for _, lx, ly in data if ly <= fit.bound_exponent * lx + fit.log_C)
    return ok / len(data)


# ---------------------------------------------------------------- lemma battery


def sandwich_check(word, *, gamma_scale: Fraction | int = 1) -> tuple[float, float]:
    """(lower margin, upper margin) in log units; both positive when the
    diameter sandwich holds for the sampled diameter."""
    g = derived_constants().gamma_lower * Fraction(gamma_scale)
    lo = log_cylinder_lower(word, gamma=g)
    hi = log_cylinder_upper(word)
    sd = sampled_log_diameter(word)
    return sd - lo, hi - sd


def measure_bound_check(word) -> float:
    """Margin (log C + log_diam_lo) - log mu([word]), with the product constant C
    accumulated level by level; rigorous lower end."""
    word = tuple(word)
    n = len(word)
    g = derived_constants().gamma_lower
    log_c = iv.mpf(0)
    for j in range(1, n + 1):
        log_c += 2 * iv.log(iv.sqrt(iv.mpf(8)) * iv.mpf(T**j) + 1) - iv.log(iv.mpf(shell_cardinality(j)))
    log_c -= iv.log(iv.mpf(g.numerator) / g.denominator)
    log_mu = iv.mpf(0)
    for j in range(1, n + 1):
        log_mu -= iv.log(iv.mpf(shell_cardinality(j)))
    lo = log_cylinder_lower(word)
    margin = (log_c + lo) - log_mu
    return float(margin.a)


def _random_d2_word(rng, max_abs: int, depth: int) -> list[GaussianInt]:
    out = []
    while len(out) < depth:
        a, b = rng.randint(-max_abs, max_abs), rng.randint(-max_abs, max_abs)
        if a * a + b * b >= 8:
            out.append(GaussianInt(a, b))
    return out


DEFAULT_PATTERNS = (
    ((0, 0), (1, 0)),
    ((0, 0), (1, 0), (0, 1)),
    ((0, 0), (1, 0), (0, 1), (1, 1)),
    ((0, 0), (2, 1), (4, 4)),
    ((0, 0), (4, 0), (0, 4), (4, 4), (2, 2)),
    ((0, 0), (1, 3), (3, 1), (4, 4)),
)


def _lemma_chunk(seed: int, n: int, gamma_scale: str, max_depth: int):
    rng = _streams.py_rng(seed)
    gs = Fraction(gamma_scale)
    worst = {"sandwich_lo": (math.inf, None), "sandwich_hi": (math.inf, None),
             "qn": (True, None), "measure": (math.inf, None)}
    for _ in range(n):
        depth = rng.randint(1, max_depth)
        w = sample_seed_word(depth, rng.getrandbits(63)).digits
        m_lo, m_hi = sandwich_check(w, gamma_scale=gs)
        key = [[d.re, d.im] for d in w]
        if m_lo < worst["sandwich_lo"][0]:
            worst["sandwich_lo"] = (m_lo, key)
        if m_hi < worst["sandwich_hi"][0]:
            worst["sandwich_hi"] = (m_hi, key)
        qs = [c.q.norm_sq() for c in convergents(w)]
        if worst["qn"][0] and any(a >= b for a, b in zip(qs, qs[1:])):
            worst["qn"] = (False, key)
        mb = measure_bound_check(w[: min(len(w), 10)])
        if mb < worst["measure"][0]:
            worst["measure"] = (mb, key)
    return worst


def _check(name: str, ok: bool, witness=None, margin=None) -> dict:
    return {"name": name, "status": "pass" if ok else "fail", "witness": witness, "margin": margin}


def verify_lemmas(
    trials: int = 10_000,
    seed: int = 0,
    *,
    gamma_scale=1,
    max_depth: int = 12,
    threads: int | None = 1,
) -> dict:
    """Run the full property battery and return a machine-readable report."""
    if trials < 1:
        raise HurwitzError("trials must be >= 1")
    checks = []

    sizes = _streams.chunk_sizes(trials, 500)
    seeds = _streams.child_seeds(seed, len(sizes) + 4)
    parts = _streams.pmap(_lemma_chunk, [(s, n, str(Fraction(gamma_scale)), max_depth)
                                         for s, n in zip(seeds, sizes)], threads)
    merged = parts[0]
    for part in parts[1:]:
        for key in ("sandwich_lo", "sandwich_hi", "measure"):
            if part[key][0] < merged[key][0]:
                merged[key] = part[key]
        if merged["qn"][0] and not part["qn"][0]:
            merged["qn"] = part["qn"]
    m, w = merged["sandwich_lo"]
    checks.append(_check("diameter_sandwich_lower", m > 0, w, m))
    m, w = merged["sandwich_hi"]
    checks.append(_check("diameter_sandwich_upper", m >= 0, w, m))
    checks.append(_check("qn_strictly_increasing", merged["qn"][0], merged["qn"][1]))
    m, w = merged["measure"]
    checks.append(_check("measure_vs_diameter", m >= 0, w, m))

    # round trip on general D2 words
    rng = _streams.py_rng(seeds[-1])
    bad = None
    for _ in range(min(trials, 2000)):
        wd = _random_d2_word(rng, 30, rng.randint(1, max_depth))
        ds = expand(reconstruct(wd), max_digits=len(wd) + 1)
        if ds.digits != tuple(wd) or not ds.exhausted:
            bad = [[d.re, d.im] for d in wd]
            break
    checks.append(_check("expand_reconstruct_round_trip", bad is None, bad))

    card = {n: (sum(1 for _ in shell_members(n)), shell_cardinality(n)) for n in range(1, 5)}
    checks.append(_check("shell_cardinality", all(a == b for a, b in card.values()),
                         {str(n): list(v) for n, v in card.items()}))

    schedules = {}
    for e in ("0.05", "0.1", "0.5", "1.0"):
        try:
            schedules[e] = make_schedule(float(e), 6)
        except HurwitzError as exc:
            checks.append(_check(f"schedule_eps_{e}", False, str(exc)))
    for e, s in schedules.items():
        rep = check_schedule(s)
        checks.append(_check(f"schedule_eps_{e}", rep["pass"], list(s.levels)))
        nonempty = [square(k, s) for k in range(1, s.horizon + 1) if square(k, s).side > 0]
        sep = all(a.max_norm_inf() < b.min_norm_inf() for a, b in zip(nonempty, nonempty[1:]))
        checks.append(_check(f"squares_disjoint_eps_{e}", sep))
        lm = insertion_cost_margins(s)
        checks.append(_check(f"insertion_cost_eps_{e}", all(x["pass"] for x in lm),
                             margin=min(x["lhs"] - x["rhs"] for x in lm)))

    # insert / eliminate and distinctness
    rng = _streams.py_rng(seeds[-2])
    s = schedules.get("1.0")
    rt_bad, dist_bad = None, None
    if s is not None:
        for _ in range(min(trials, 2000)):
            y = sample_seed_word(rng.randint(1, s.levels[2]), rng.getrandbits(63))
            x = insert(y, s)
            if eliminate(x, s) != y and rt_bad is None:
                rt_bad = [[d.re, d.im] for d in y]
            if len(set(x.digits)) != len(x) and dist_bad is None:
                dist_bad = [[d.re, d.im] for d in y]
    checks.append(_check("insert_eliminate_round_trip", s is not None and rt_bad is None, rt_bad))
    checks.append(_check("inserted_digits_distinct", s is not None and dist_bad is None, dist_bad))

    pat_ok, pat_wit = True, {}
    if s is not None:
        for pts in DEFAULT_PATTERNS:
            A = LatticePattern(pts)
            has = [bool(copies_in_square(A, k, s)) for k in range(1, s.horizon + 1)]
            first = has.index(True) if True in has else None
            ok = first is not None and all(has[first:])
            pat_wit[str(list(pts))] = None if first is None else first + 1
            pat_ok &= ok
    checks.append(_check("pattern_copies_in_squares", s is not None and pat_ok, pat_wit))

    ifs = verify_ifs_properties(trials, seeds[-3], threads=threads)
    checks.append(_check("ifs_properties", ifs["pass"],
                         {k: v["pass"] for k, v in ifs["properties"].items()}))

    return {
        "format": 1,
        "trials": trials,
        "seed": seed,
        "gamma_scale": str(Fraction(gamma_scale)),
        "pass": all(c["status"] == "pass" for c in checks),
        "checks": checks,
    }
