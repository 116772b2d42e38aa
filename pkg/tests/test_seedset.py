import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitzcf.errors import (
    HurwitzError,
    IndexOutOfSchedule,
    NotInImage,
    NotSeedWord,
    ScheduleTooShort,
)
from hurwitzcf.gaussian import GaussianInt as G
from hurwitzcf.hurwitz import DigitSequence
from hurwitzcf.seedset import (
    InsertionSchedule,
    check_schedule,
    eliminate,
    level_condition_holds,
    in_shell,
    insert,
    is_seed_word,
    insertion_cost_margins,
    make_schedule,
    sample_seed_word,
    sample_shell_digits,
    shell_array,
    shell_cardinality,
    shell_members,
    square,
    word_weight,
)
from oracles import box_count_shell, level_condition_float, n1_by_root, n1_by_scan


@pytest.mark.parametrize("n, expected", [(1, 96), (2, 936), (3, 8640), (4, 78408)])
def test_shell_cardinality(n, expected):
    assert shell_cardinality(n) == expected == box_count_shell(n) == 12 * 9**n - 4 * 3**n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_shell_enumeration(n):
    members = list(shell_members(n))
    assert len(members) == len(set(members)) == shell_cardinality(n)
    assert all(3**n <= g.norm_inf() < 2 * 3**n for g in members)
    assert len(shell_array(n)) == shell_cardinality(n)


def test_sample_depth_one():
    for s in range(50):
        w = sample_seed_word(1, s)
        assert w[0].norm_inf() in (3, 4, 5)
    assert word_weight(w) == pytest.approx(-math.log(96))


def test_weight_product_rule():
    w = sample_seed_word(3, 4)
    assert word_weight(w) == pytest.approx(-math.log(96) - math.log(936) - math.log(8640))
    assert word_weight([G(1, 1)]) == -math.inf


def test_sampling_is_reproducible():
    assert sample_seed_word(8, 123) == sample_seed_word(8, 123)
    assert sample_seed_word(8, 123) != sample_seed_word(8, 124)


def test_shell_sampling_is_uniform():
    rng = np.random.default_rng(0)
    z = sample_shell_digits(rng, 1, 96_000)
    _, counts = np.unique(z, return_counts=True)
    assert len(counts) == 96
    # chi-square with 95 dof; 99.99% quantile is about 150
    chi2 = ((counts - 1000) ** 2 / 1000).sum()
    assert chi2 < 150
    assert np.all(np.maximum(abs(z.real), abs(z.imag)) >= 3)


@pytest.mark.parametrize("eps, n1", [(0.05, 7), (0.1, 6), (0.5, 4), (1.0, 3)])
def test_minimal_first_level(eps, n1):
    assert n1_by_scan(eps) == n1 == n1_by_root(eps)
    assert make_schedule(eps, 3).levels[0] == n1


def test_schedule_example():
    s = make_schedule(0.1, 4)
    assert s.levels == (6, 12, 24, 48)
    rep = check_schedule(s)
    assert rep["pass"] and all(rep["shell_gap"]) and all(rep["square_budget"])
    assert rep["level_tail_certified"]


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.5, 1.0])
def test_schedule_horizon_six(eps):
    s = make_schedule(eps, 6)
    assert check_schedule(s)["pass"]
    assert all(b == 2 * a for a, b in zip(s.levels, s.levels[1:]))


def test_schedule_rejects_nonpositive_epsilon():
    with pytest.raises(HurwitzError):
        make_schedule(0, 4)
    with pytest.raises(HurwitzError):
        make_schedule(-0.5, 4)


def test_checker_rejects_bad_schedule():
    bad = InsertionSchedule(F(1, 10), (5, 10, 20), 60)
    rep = check_schedule(bad)
    assert not rep["pass"] and 5 in rep["level_failures"]
    assert not check_schedule(InsertionSchedule(F(1, 10), (12, 6), 60))["pass"]


@settings(max_examples=50)
@given(st.integers(1, 300), st.sampled_from(["0.05", "0.1", "0.2", "0.5", "1.0", "2.5"]))
def test_exact_level_condition_agrees_with_float(n, eps):
    v = level_condition_float(n, float(eps))
    if abs(v) > 1e-6:
        assert level_condition_holds(n, eps) == (v > 0)


def test_square_example():
    s = InsertionSchedule(F(1), (16, 32, 64), 64)
    W = square(1, s)
    assert W.side == 4 and len(W) == 16 == len(W.points)
    assert W.anchor == G(86093442, 86093442) == G(2 * 3**16, 2 * 3**16)
    assert len(W) <= s.epsilon * 16
    with pytest.raises(IndexOutOfSchedule):
        square(4, s)
    with pytest.raises(IndexOutOfSchedule):
        square(0, s)


def test_square_empty_when_eps_n_below_one():
    s = make_schedule(0.05, 6)
    assert [square(k, s).side for k in range(1, 7)] == [0, 0, 1, 1, 2, 3]


def test_square_points_and_membership():
    s = InsertionSchedule(F(1), (9, 18), 18)
    W = square(1, s)
    assert W.points[:3] == [W.anchor, W.anchor + G(0, 1), W.anchor + G(0, 2)]
    assert all(p in W for p in W.points)
    assert W.anchor + G(3, 0) not in W


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.5, 1.0])
def test_squares_separated_and_outside_seed_shells(eps):
    s = make_schedule(eps, 6)
    sq = [square(k, s) for k in range(1, 7) if square(k, s).side]
    assert all(a.max_norm_inf() < b.min_norm_inf() for a, b in zip(sq, sq[1:]))
    for W in sq:
        # W_k sits at sup-norm 2*3^n_k, beyond shells n <= n_k and below shell n_k + 1
        n = s.levels[W.k - 1]
        assert W.min_norm_inf() >= 2 * 3**n and W.max_norm_inf() < 3 ** (n + 1)


@pytest.mark.parametrize("eps", [0.05, 0.1, 0.5, 1.0])
def test_insertion_cost(eps):
    assert all(m["pass"] for m in insertion_cost_margins(make_schedule(eps, 6)))


def test_insert_example():
    s = InsertionSchedule(F(1), (16, 32, 64), 64)
    y = sample_seed_word(16, 1)
    x = insert(y, s)
    assert len(x) == 32
    assert list(x.digits[16:]) == square(1, s).points
    assert insert(y.prefix(15), s).digits == y.digits[:15]
    assert len(set(x.digits)) == len(x)


def test_insert_errors():
    s = make_schedule(1.0, 2)
    with pytest.raises(NotSeedWord):
        insert([G(1, 1)], s)
    with pytest.raises(ScheduleTooShort):
        insert(sample_seed_word(7, 0), s)


def test_eliminate_negative_controls():
    s = make_schedule(1.0, 3)
    x = list(insert(sample_seed_word(6, 2), s).digits)
    assert eliminate([], s) == DigitSequence(())
    tampered = x.copy()
    # W_1 is the single digit right after seed digit n_1
    tampered[s.levels[0]] = tampered[s.levels[0]] + G(1, 0)
    with pytest.raises(NotInImage):
        eliminate(tampered, s)
    tampered = x.copy()
    tampered[1] = G(0, 0)
    with pytest.raises(NotInImage):
        eliminate(tampered, s)
    # x[:4] is the full image of a 3-digit word; x[:8] cuts W_2 short
    assert len(eliminate(x[:4], s)) == 3
    with pytest.raises(NotInImage):
        eliminate(x[:8], s)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([0.05, 0.1, 0.5, 1.0]), st.integers(0, 2))
def test_insert_eliminate_round_trip(seed, eps, k):
    s = make_schedule(eps, 3)
    depth = s.levels[k]
    y = sample_seed_word(depth, seed)
    x = insert(y, s)
    assert eliminate(x, s) == y
    assert len(set(x.digits)) == len(x)
    assert len(x) == depth + sum(len(square(j, s)) for j in range(1, k + 2))


def test_is_seed_word():
    assert is_seed_word([G(3, 0), G(0, -9)])
    assert not is_seed_word([G(9, 0)])
    assert in_shell(G(5, -5), 1) and not in_shell(G(6, 0), 1)
