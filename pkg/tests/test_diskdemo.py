from fractions import Fraction as Q
from itertools import product

import pytest

from cascade_ellis.dynamics import Finite
from cascade_ellis.diskdemo import (
    DiskPoint,
    disk_apply,
    disk_commute_check,
    disk_p_iterate,
    disk_period,
    nonwap_witness,
    odd_primes,
)
from cascade_ellis.residues import ResidueSystem, UnderdeterminedResidue

PI = DiskPoint(1)
X3 = DiskPoint(1 + Q(1, 6))


def test_apply_examples():
    assert disk_apply(PI, 1) == DiskPoint(1, 1)
    assert disk_apply(PI, 2) == PI
    assert disk_apply(DiskPoint(Q(5, 4)), 8) == DiskPoint(Q(5, 4), 0)
    assert str(DiskPoint(Q(5, 4), Q(7, 2))) == "(5/4·pi, 3/2·pi)"


def test_point_validation():
    with pytest.raises(ValueError):
        DiskPoint(Q(5, 2))
    with pytest.raises(ValueError):
        DiskPoint(Q(-1, 2))
    assert DiskPoint(0, Q(1, 3)) == DiskPoint(0)


def test_period_examples():
    assert disk_period(PI) == Finite(2)
    assert disk_period(X3) == Finite(12)
    assert disk_period(DiskPoint(0)) == Finite(1)
    assert disk_period(DiskPoint(2)) == Finite(1)


RADII = [Q(a, b) for b in range(1, 13) for a in range(0, 2 * b + 1)]


@pytest.mark.parametrize("r", sorted(set(RADII))[::3])
def test_period_is_minimal(r):
    x = DiskPoint(r, Q(1, 7))
    k = disk_period(x).k
    assert disk_apply(x, k) == x
    assert all(disk_apply(x, j) != x for j in range(1, k))


def test_additivity():
    for r, a, b in product([Q(1, 3), Q(7, 5), Q(11, 6), Q(2)], range(-7, 8, 3), range(-9, 10, 4)):
        x = DiskPoint(r, Q(1, 4))
        assert disk_apply(disk_apply(x, a), b) == disk_apply(x, a + b)


def test_p_iterate_examples():
    assert disk_p_iterate(X3, {12: 6}) == DiskPoint(1 + Q(1, 6), 1)
    assert disk_p_iterate(PI, {2: 0}) == PI
    assert disk_p_iterate(DiskPoint(1, Q(1, 2)), {2: 1}) == DiskPoint(1, Q(3, 2))
    with pytest.raises(UnderdeterminedResidue):
        disk_p_iterate(X3, {2: 0})


def test_p_iterate_is_the_residue_power():
    rs = ResidueSystem.constant(17)
    for r in [Q(1, 3), Q(5, 4), Q(9, 7)]:
        x = DiskPoint(r, Q(1, 5))
        k = disk_period(x).k
        assert disk_p_iterate(x, rs) == disk_apply(x, 17 % k)
        assert disk_p_iterate(x, {k: 5}) == disk_apply(x, 5)


def test_nonwap_witness():
    rep = nonwap_witness(3)
    assert [r.n for r in rep.rows] == [3, 5, 7]
    for row in rep.rows:
        assert row.point == DiskPoint(1 + Q(1, 2 * row.n))
        assert row.period == 4 * row.n and row.residue == 2 * row.n
        assert row.image == DiskPoint(row.point.radius, 1)
    assert rep.limit_image == PI
    assert rep.gap == 1
    one = nonwap_witness(1)
    assert len(one.rows) == 1 and one.rows[0].period == 12 and one.rows[0].image == DiskPoint(1 + Q(1, 6), 1)
    with pytest.raises(ValueError):
        nonwap_witness(0)


def test_nonwap_gap_for_longer_runs():
    rep = nonwap_witness(12)
    assert rep.rows[-1].n == odd_primes(12)[-1] == 41
    assert all(r.image.angle == 1 for r in rep.rows) and rep.gap == 1


def test_commute_check():
    pts = [PI, X3]
    assert disk_commute_check(pts, {2: 1, 12: 6}, {2: 0, 12: 4}) == "Commutes"
    assert disk_commute_check([], {}, {}) == "Commutes"
    with pytest.raises(UnderdeterminedResidue):
        disk_commute_check(pts, {2: 1}, {2: 0, 12: 4})
