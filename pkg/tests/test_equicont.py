from fractions import Fraction
from itertools import combinations

import pytest

from cascade_ellis.dynamics import NotAllPeriodic
from cascade_ellis.equicont import (
    check_modulus,
    check_uniform_bound,
    close_pairs,
    equicontinuity_failure_witness,
    equicontinuity_modulus,
    parse_dyadic,
    uniform_period_bound,
)
from cascade_ellis.presentation import Point, apply_power, distance, enumerate_points, parse_cascade
from strategies import random_texts

P = parse_cascade
HALF = Fraction(1, 2)


def test_parse_dyadic():
    assert parse_dyadic("1") == 1
    assert parse_dyadic("1/8") == Fraction(1, 8)
    assert parse_dyadic("1/2^3") == Fraction(1, 8)
    assert parse_dyadic("3/2^4") == Fraction(3, 16)
    for bad in ["1/3", "0", "x", "1/0", "-1/2"]:
        with pytest.raises(ValueError):
            parse_dyadic(bad)


def test_uniform_bound_examples():
    assert uniform_period_bound(P("tower(cycle(3))"), HALF).l == 3
    assert uniform_period_bound(P("sum(cycle(2),cycle(3))"), Fraction(1, 4)).l == 6
    for eps in (1, HALF, Fraction(1, 64)):
        assert uniform_period_bound(P("cycle(1)"), eps).l == 1
    with pytest.raises(NotAllPeriodic):
        uniform_period_bound(P("shift2"), HALF)


def test_small_pieces_contribute_nothing():
    e = P("tower(cycle(1),cycle(1),cycle(1),cycle(5),cycle(7))")
    # piece 3 has diameter 1/16, later pieces are smaller still
    assert uniform_period_bound(e, Fraction(1, 16)).l == 5
    assert uniform_period_bound(e, Fraction(1, 32)).l == 35
    assert uniform_period_bound(e, Fraction(1, 8)).l == 1


def test_modulus_examples():
    for k in (1, 4, 7):
        m = equicontinuity_modulus(P(f"cycle({k})"), HALF)
        # the three-term estimate gives eps/4, not eps (see the ledger)
        assert m.delta == Fraction(1, 8)
        assert check_modulus(P(f"cycle({k})"), type(m)(HALF, HALF, HALF, k), 0, 16) is None
    m = equicontinuity_modulus(P("tower(cycle(2))"), Fraction(1, 4), verify_depth=8, verify_m=64)
    assert m.delta <= Fraction(1, 12)
    m = equicontinuity_modulus(P("tower(cycle(2^n))"), HALF, verify_depth=8, verify_m=64)
    assert m.delta < HALF / 3


@pytest.mark.parametrize("text", random_texts(31, 25))
def test_bound_and_modulus_sound(text):
    e = P(text)
    for k in range(0, 7):
        eps = Fraction(1, 2**k)
        ub = uniform_period_bound(e, eps, verify_depth=None)
        assert check_uniform_bound(e, ub, 4, 32) is None
        m = equicontinuity_modulus(e, eps, verify_depth=None)
        assert check_modulus(e, m, 3, 32) is None


@pytest.mark.parametrize("text", random_texts(32, 25))
def test_bound_monotone(text):
    e = P(text)
    ls = [uniform_period_bound(e, Fraction(1, 2**k), verify_depth=None).l for k in range(7)]
    for big, small in zip(ls, ls[1:]):
        assert small % big == 0


def test_failure_witness_shift2():
    w = equicontinuity_failure_witness(P("shift2"), HALF, 8, 64)
    x, y, n = w
    e = P("shift2")
    assert {x, y} == {Point((-8,)), Point(("-oo",))}
    assert distance(e, x, y) == Fraction(1, 256)
    assert distance(e, apply_power(e, x, n), apply_power(e, y, n)) >= HALF
    # the first failing iterate in the order 1, -1, 2, -2, ... is 7: f^7(-8) = -1
    assert n == 7
    # the value 16 also separates the pair
    assert distance(e, apply_power(e, Point((-8,)), 16), Point(("-oo",))) == 1


def test_failure_witness_none_for_cycle():
    for eps in (1, HALF, Fraction(1, 8)):
        assert equicontinuity_failure_witness(P("cycle(5)"), eps, 8, 64) is None


def test_failure_witness_ishift_fixture():
    # found by the search, frozen here
    assert equicontinuity_failure_witness(P("ishift"), HALF, 8, 64) == (Point((8,)), Point(("oo",)), -4)


def test_witness_is_closest_failing_pair():
    e = P("sum(cycle(3),shift2)")
    x, y, n = equicontinuity_failure_witness(e, HALF, 6, 64)
    d = distance(e, x, y)
    assert d == Fraction(1, 64)


@pytest.mark.parametrize("text", random_texts(33, 20, aperiodic=True) + ["shift2", "cycleof(ishift,2)"])
def test_close_pairs_match_all_pairs(text):
    e = P(text)
    pts = enumerate_points(e, 3)
    for r in (1, HALF, Fraction(1, 8), Fraction(1, 32)):
        want = {(x, y) for x, y in combinations(pts, 2) if distance(e, x, y) < r}
        assert set(close_pairs(e, pts, r)) == want
