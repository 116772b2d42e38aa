"""Acceptance criteria, one test per criterion, each at its stated tolerance
and time budget.  The terminal summary prints one PASS/FAIL line per criterion."""

import math
import random
import time
from collections import Counter
from fractions import Fraction as F

from hurwitzcf.analysis import (
    calibrate_r1,
    cover_words,
    dimension_scan,
    four_corner_cloud,
    holder_diagnostic,
    holder_satisfied,
    mass_distribution_check,
    measure_bound_check,
)
from hurwitzcf.gaussian import GaussianInt as G
from hurwitzcf.hurwitz import convergents, expand, reconstruct
from hurwitzcf.ifs import cylinder, sampled_log_diameter
from hurwitzcf.patterns import LatticePattern, copies_in_square, find_copies
from hurwitzcf.seedset import (
    InsertionSchedule,
    check_schedule,
    eliminate,
    insert,
    insertion_cost_margins,
    make_schedule,
    sample_seed_word,
    shell_cardinality,
    shell_members,
    square,
)
from oracles import box_count_shell, brute_force_copies, n1_by_root, n1_by_scan

EPSILONS = (0.05, 0.1, 0.5, 1.0)


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def random_d2_word(rng, depth, bound=50):
    out = []
    while len(out) < depth:
        g = G(rng.randint(-bound, bound), rng.randint(-bound, bound))
        if g.norm_sq() >= 8:
            out.append(g)
    return out


def test_criterion_1_shell_cardinalities():
    with Budget(5):
        for n in range(1, 5):
            count = sum(1 for _ in shell_members(n))
            assert count == 12 * 3 ** (2 * n) - 4 * 3**n == shell_cardinality(n) == box_count_shell(n)
    assert [shell_cardinality(n) for n in range(1, 5)] == [96, 936, 8640, 78408]


def test_criterion_2_round_trip():
    rng = random.Random(2)
    failures = 0
    with Budget(60):
        for _ in range(10_000):
            w = random_d2_word(rng, rng.randint(1, 12))
            seq = expand(reconstruct(w), max_digits=len(w) + 1)
            failures += seq.digits != tuple(w) or not seq.exhausted
    assert failures == 0


def test_criterion_3_diameter_sandwich():
    violations = 0
    with Budget(60):
        for seed in range(1000):
            w = sample_seed_word(1 + seed % 20, seed).digits
            c = cylinder(w)
            s = sampled_log_diameter(w)
            violations += not (c.log_diam_lo < s <= c.log_diam_hi)
            qs = [1] + [cv.q.norm_sq() for cv in convergents(w)]
            violations += not all(a < b for a, b in zip(qs, qs[1:]))
    assert violations == 0


def test_criterion_4_measure_bound():
    margins = [measure_bound_check(sample_seed_word(1 + s % 10, 10_000 + s).digits) for s in range(1000)]
    assert min(margins) >= 0


def test_criterion_5_schedule_feasibility():
    for eps in EPSILONS:
        s = make_schedule(eps, 6)
        rep = check_schedule(s)
        assert rep["pass"] and all(rep["shell_gap"]) and all(rep["square_budget"]) and not rep["level_failures"]
    assert make_schedule(0.1, 6).levels[0] == n1_by_scan(0.1) == n1_by_root(0.1) == 6


def test_criterion_6_construction():
    for eps in EPSILONS:
        s = make_schedule(eps, 6)
        for seed in range(250):
            y = sample_seed_word(1 + seed % s.levels[2], seed)
            x = insert(y, s)
            assert eliminate(x, s) == y
            assert len(set(x.digits)) == len(x)
        sq = [square(k, s) for k in range(1, 7) if square(k, s).side]
        assert all(a.max_norm_inf() < b.min_norm_inf() for a, b in zip(sq, sq[1:]))
        assert all(m["pass"] for m in insertion_cost_margins(s))


def test_criterion_7_pattern_completeness():
    rng = random.Random(7)
    for _ in range(100):
        A = {(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(rng.randint(2, 5))}
        S = {(rng.randint(-12, 12), rng.randint(-12, 12)) for _ in range(rng.randint(1, 200))}
        n_max = rng.randint(1, 10)
        got = {(c.v.re, c.v.im, c.n) for c in find_copies(A, S, n_max)}
        if len(A) == 1:
            # a singleton is reported once per point, at n = 1
            (a,) = A
            assert got == {(x - a[0], y - a[1], 1) for x, y in S}
        else:
            assert got == brute_force_copies(A, S, n_max)

    s4 = InsertionSchedule(F(1), (16, 32), 32)
    two = copies_in_square([(0, 0), (1, 0), (0, 1), (1, 1)], 1, s4)
    assert len(two) == 14 and Counter(c.n for c in two) == {1: 9, 2: 4, 3: 1}

    s = make_schedule(1.0, 6)
    for _ in range(60):
        A = LatticePattern({(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(rng.randint(1, 5))})
        has = [bool(copies_in_square(A, k, s)) for k in range(1, 7)]
        assert True in has and all(has[has.index(True):])


def test_criterion_8_estimator_calibration():
    with Budget(120):
        scan = dimension_scan(lambda: four_corner_cloud(10), 4.0**-8, 4.0**-3, 11)
    assert abs(scan.slope - 1.0) <= 0.05


def test_criterion_9_mass_distribution():
    with Budget(600):
        rep = mass_distribution_check(0.2, 5, 100_000, seed=9)
    assert rep["alpha"] >= 1 - 0.2 - 0.1


def test_criterion_10_covering_words():
    words = [sample_seed_word(10, s).digits for s in range(10)]
    radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7]
    cal = calibrate_r1(words, radii)
    r1 = cal["r1"]
    assert r1 is not None
    violations = 0
    for r in (r for r in radii if r <= r1):
        for w in words:
            cs = cover_words(w, r)
            violations += cs.max_len > math.sqrt(2 * math.log(1 / r))
            ws = set(cs.words)
            violations += any(v[:j] in ws for v in ws for j in range(1, len(v)))
    assert violations == 0


def test_criterion_11_holder_diagnostic():
    s = make_schedule(0.1, 6)
    fit = holder_diagnostic(0.1, s, 1000, seed=11)
    assert math.isfinite(fit.log_C)
    assert holder_satisfied(fit, fit.pairs) == 1.0
    fresh = holder_diagnostic(0.1, s, 1000, seed=12)
    assert holder_satisfied(fit, fresh.pairs) >= 0.99
