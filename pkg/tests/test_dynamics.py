import pytest

from cascade_ellis.dynamics import (
    Aperiodic,
    Finite,
    classify,
    is_all_periodic,
    max_rank_set,
    minimal_sets,
    orbit,
    period,
    period_set,
    truncated_periods,
)
from cascade_ellis.presentation import (
    Point,
    apply_map,
    apply_power,
    distance,
    enumerate_points,
    parse_cascade,
)
from cascade_ellis import ellis
from strategies import mixed_texts, random_texts

P = parse_cascade


def test_period_examples():
    assert period(P("cycle(5)"), Point((3,))) == Finite(5)
    e = P("cycleof(cycle(3),2)")
    for x in enumerate_points(e, 0):
        assert period(e, x) == Finite(6)
        assert apply_power(e, x, 6) == x and all(apply_power(e, x, j) != x for j in range(1, 6))
    assert period(P("shift2"), Point((0,))) is Aperiodic
    assert period(P("shift2"), Point(("+oo",))) == Finite(1)
    assert period(P("ishift"), Point((4,))) is Aperiodic
    assert period(P("tower(cycle(2))"), Point(("*",))) == Finite(1)


@pytest.mark.parametrize("text", random_texts(11, 25, aperiodic=True))
def test_period_agrees_with_iteration(text):
    e = P(text)
    for x in enumerate_points(e, 3):
        p = period(e, x)
        if isinstance(p, Finite):
            orb = orbit(e, x, 2 * p.k)
            assert len(orb) == len(set(orb)) == p.k
            assert apply_power(e, x, p.k) == x
        else:
            assert len(set(orbit(e, x, 64))) == 64


def test_period_set_examples():
    ps = period_set(P("tower(cycle(2^n))"))
    assert ps.members(40) == [1, 2, 4, 8, 16, 32]
    assert 1024 in ps and 6 not in ps and not ps.is_finite()
    assert period_set(P("sum(cycle(2),cycle(3))")).members(100) == [2, 3]
    s = period_set(P("shift2"))
    assert s.members(10) == [1] and s.partial
    assert period_set(P("cycleof(tower(cycle(1*n+1)),2)")).members(10) == [2, 4, 6, 8, 10]


@pytest.mark.parametrize("text", random_texts(12, 25))
def test_truncated_periods_inside_period_set(text):
    e = P(text)
    ps = period_set(e)
    assert all(n in ps for n in truncated_periods(e, 4))


def test_classify_examples():
    c = classify(P("cycle(7)"))
    assert all(c.verdicts().values())
    assert c.witness_aperiodic_point is None and c.witness_noninjective is None
    s = classify(P("shift2"))
    assert not any(s.verdicts().values())
    el, x, y, img = s.witness_noninjective
    assert (x, y, img) == (Point((0,)), Point((5,)), Point(("+oo",)))
    assert el == ellis.LimitElement(ellis.Side.FORWARD, ellis.ResidueSystem.constant(0))
    i = classify(P("ishift"))
    assert not any(i.verdicts().values())
    assert i.witness_noninjective[1:] == (Point((0,)), Point((1,)), Point(("oo",)))


def test_report_keys():
    rep = classify(P("shift2")).report()
    for key in ("all_periodic", "equicontinuous", "distal", "fp_homeo_exists", "uniform_bound_exists", "en_eq_ez"):
        assert f"\n{key}: false" in rep
    assert "witness_equicont_failure" in rep and "witness_noninjective" in rep


@pytest.mark.parametrize("text", mixed_texts(5, 40))
def test_classification_consistent(text):
    e = P(text)
    c = classify(e, depth=6, iter_bound=64)
    assert c.consistent
    assert c.all_periodic == is_all_periodic(e)
    assert c.all_periodic == all(isinstance(period(e, x), Finite) for x in enumerate_points(e, 4))
    if not c.all_periodic:
        assert c.witness_aperiodic_point is not None
        assert c.witness_noninjective is not None and c.witness_equicont_failure is not None
    else:
        assert c.witness_noninjective is None and c.witness_equicont_failure is None


def test_max_rank_set_examples():
    assert max_rank_set(P("sum(tower(cycle(2)),cycle(5))")) == [Point(("L", "*"))]
    assert set(max_rank_set(P("shift2"))) == {Point(("-oo",)), Point(("+oo",))}
    assert len(max_rank_set(P("cycle(4)"))) == 4


@pytest.mark.parametrize("text", random_texts(13, 30, aperiodic=True))
def test_max_rank_set_invariant(text):
    e = P(text)
    m = max_rank_set(e)
    assert {apply_map(e, x) for x in m} == set(m)
    assert all(isinstance(period(e, x), Finite) for x in m)


def test_minimal_sets_examples():
    ms = minimal_sets(P("tower(cycle(3))"), depth=4)
    assert (Point(("*",)),) in ms.orbits
    assert sum(len(o) == 3 for o in ms.orbits) == 5
    assert len(ms.families) == 1 and not ms.complete
    s = minimal_sets(P("shift2"))
    assert set(s.orbits) == {(Point(("-oo",)),), (Point(("+oo",)),)} and s.complete
    c = minimal_sets(P("cycle(6)"))
    assert len(c.orbits) == 1 and len(c.orbits[0]) == 6


def test_minimal_sets_have_no_proper_invariant_subset():
    e = P("sum(cycleof(cycle(2),3),tower(cycle(4)))")
    for orb in minimal_sets(e, 3).orbits:
        s = set(orb)
        # every nonempty invariant subset contains a full forward orbit, hence all of s
        for x in orb:
            assert set(orbit(e, x, len(s) + 1)) == s


def test_orbit_examples():
    assert orbit(P("cycle(3)"), Point((0,)), 10) == [Point((0,)), Point((1,)), Point((2,))]
    assert orbit(P("shift2"), Point((-2,)), 5) == [Point((k,)) for k in range(-2, 3)]
    assert orbit(P("ishift"), Point((5,)), 6) == [Point((k,)) for k in (5, 3, 1, 0, 2, 4)]


def test_uniform_failure_witness_really_moves():
    c = classify(P("sum(cycle(2),ishift)"))
    x, eps = c.witness_uniform_failure
    e = P("sum(cycle(2),ishift)")
    assert all(distance(e, x, apply_power(e, x, l)) >= eps for l in range(1, 200))
