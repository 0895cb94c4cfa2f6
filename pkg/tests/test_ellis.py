import random
from math import lcm

import pytest

from cascade_ellis import oracle
from cascade_ellis.dynamics import Finite, period, truncated_periods
from cascade_ellis.ellis import (
    Equal,
    LimitElement,
    NotAbelian,
    NotEqual,
    NotInvertible,
    NotWap,
    PrincipalPower,
    Side,
    Wap,
    Abelian,
    catalog_values,
    compose,
    en_equals_ez,
    equal,
    evaluate,
    format_element,
    identity,
    inverse,
    is_abelian_truncated,
    is_wap,
    parse_element,
    truncated_semigroup,
)
from cascade_ellis.presentation import (
    Point,
    apply_inverse,
    apply_power,
    enumerate_points,
    parse_cascade,
    parse_point,
)
from cascade_ellis.residues import (
    MalformedResidue,
    ResidueSystem,
    UnderdeterminedResidue,
    parse_residues,
    realizable,
)
from strategies import random_texts

P = parse_cascade
F, B = Side.FORWARD, Side.BACKWARD
PLUS = LimitElement(F, ResidueSystem.constant(0))
MINUS = LimitElement(B, ResidueSystem.constant(0))
S23 = P("sum(cycle(2),cycle(3))")


def lim(text, side=F):
    return LimitElement(side, parse_residues(text))


def test_element_text():
    for text in ["id", "f^5", "f^-3", "lim+[2:1,3:2]", "lim-[*:0]", "lim+[2^n:g(n)-1]"]:
        assert format_element(parse_element(text)) == text
    assert parse_element("f") == PrincipalPower(1)
    with pytest.raises(MalformedResidue):
        parse_element("g^2")


def test_compose_examples():
    assert compose(PrincipalPower(2), PrincipalPower(3), S23) == PrincipalPower(5)
    s = P("shift2")
    pm, mp = compose(PLUS, MINUS, s), compose(MINUS, PLUS, s)
    assert equal(pm, MINUS, s) and equal(mp, PLUS, s) and not equal(pm, mp, s)
    c = compose(lim("2:1,3:2"), lim("2:1,3:1"), S23)
    assert equal(c, identity(), S23)
    assert c.effective.mapping == {2: 0, 3: 0}


def test_compose_catalog_tables():
    s = P("shift2")
    for a, b, want in [(PLUS, PLUS, PLUS), (MINUS, MINUS, MINUS), (PrincipalPower(4), PLUS, PLUS), (PLUS, PrincipalPower(-3), PLUS)]:
        assert equal(compose(a, b, s), want, s)
    i = P("ishift")
    oo = LimitElement(F, ResidueSystem.constant(0))
    for other in (PrincipalPower(3), PrincipalPower(-2), oo, LimitElement(B, ResidueSystem.constant(0))):
        for c in (compose(oo, other, i), compose(other, oo, i)):
            assert all(evaluate(c, i, x) == Point(("oo",)) for x in enumerate_points(i, 6))
    assert set(catalog_values(PLUS, P("sum(shift2,ishift)")).values()) == {"Plus", "ConstInfinity"}
    assert catalog_values(MINUS, s) == {"<root>": "Minus"}


def test_inverse_examples():
    assert inverse(PrincipalPower(3), S23) == PrincipalPower(-3)
    inv = inverse(lim("2:1,3:2"), S23)
    assert inv.side is B and inv.effective.mapping == {2: 1, 3: 1}
    with pytest.raises(NotInvertible):
        inverse(PLUS, P("shift2"))
    assert inverse(PrincipalPower(2), P("shift2")) == PrincipalPower(-2)


def test_evaluate_examples():
    assert evaluate(lim("3:2"), P("cycle(3)"), Point((0,))) == Point((2,))
    assert evaluate(PLUS, P("shift2"), Point(("-oo",))) == Point(("-oo",))
    assert evaluate(PLUS, P("shift2"), Point((-40,))) == Point(("+oo",))
    assert evaluate(MINUS, P("shift2"), Point(("+oo",))) == Point(("+oo",))
    t = P("tower(cycle(1*n+1))")
    assert evaluate(lim("*:g(n)-1"), t, parse_point("2.0")) == parse_point("2.2")
    with pytest.raises(UnderdeterminedResidue):
        evaluate(lim("2:1"), S23, Point(("R", 0)))


def test_cycleof_shift_moves_copy_before_limit():
    e = P("cycleof(shift2,2)")
    x = Point((0, 5))
    assert evaluate(lim("2:1"), e, x) == Point((1, "+oo"))
    assert evaluate(lim("2:1", B), e, x) == Point((1, "-oo"))
    assert evaluate(lim("2:0"), e, x) == Point((0, "+oo"))


def test_en_equals_ez_examples():
    r = en_equals_ez(S23)
    assert isinstance(r, Equal) and r.witness.residues.mapping == {2: 1, 3: 2}
    assert equal(r.witness, PrincipalPower(5), S23)
    assert en_equals_ez(P("shift2")) == NotEqual(Point((0,)))
    c1 = en_equals_ez(P("cycle(1)"))
    assert isinstance(c1, Equal) and equal(c1.witness, identity(), P("cycle(1)"))
    assert isinstance(en_equals_ez(P("ishift")), NotEqual)


def test_truncated_semigroup_examples():
    t = truncated_semigroup(S23)
    assert len(t.elements) == 6 and t.closed and t.commutative and t.is_associative()
    # cyclic: generated by the all-ones tuple
    one = t.index("[1]")
    k, seen = one, {one}
    for _ in range(5):
        k = t.table[one][k]
        seen.add(k)
    assert len(seen) == 6
    s = truncated_semigroup(P("shift2"), bound=2)
    assert s.labels == ["f^-2", "f^-1", "id", "f", "f^2", "f+", "f-"]
    p, m = s.index("f+"), s.index("f-")
    assert s.table[p][m] != s.table[m][p]
    assert s.table[p][m] == m and s.table[m][p] == p
    assert not s.continuous[p] and not s.continuous[m] and all(s.continuous[:5])
    i = truncated_semigroup(P("ishift"), bound=1)
    assert i.labels == ["f^-1", "id", "f", "oo"] and i.commutative and all(i.continuous)


def test_wap_and_abelian_examples():
    assert isinstance(is_wap(P("tower(cycle(2))")), Wap)
    w = is_wap(P("shift2"))
    assert isinstance(w, NotWap) and w.element == PLUS
    assert w.limit == Point(("-oo",)) and w.limit_image == Point(("-oo",))
    assert set(w.images) == {Point(("+oo",))}
    assert isinstance(is_wap(P("ishift")), Wap)
    assert isinstance(is_abelian_truncated(P("tower(cycle(3),cycle(2))")), Abelian)
    na = is_abelian_truncated(P("shift2"))
    assert isinstance(na, NotAbelian) and na.pair == ("f+", "f-")
    assert isinstance(is_abelian_truncated(P("ishift"), bound=1), Abelian)


def _random_element(rng, periods):
    """A realizable residue element: residues of a random integer on every
    truncated period, and a catch-all tail of the same integer."""
    a = rng.randrange(0, 10**6)
    side = rng.choice([F, B])
    rs = ResidueSystem.of({n: a % n for n in periods if n > 1}, None)
    rs = ResidueSystem(rs.constraints, ResidueSystem.constant(a).tail)
    assert realizable(rs)
    return LimitElement(side, rs)


@pytest.mark.parametrize("text", random_texts(21, 20))
def test_homomorphism_and_inverse_laws(text):
    e = P(text)
    rng = random.Random(text)
    pts = enumerate_points(e, 4)
    periods = truncated_periods(e, 4)
    for _ in range(5):
        g, h = _random_element(rng, periods), _random_element(rng, periods)
        gh = compose(g, h, e)
        for x in pts:
            assert evaluate(gh, e, x) == evaluate(g, e, evaluate(h, e, x))
        gi = inverse(g, e)
        assert gi.effective == g.effective.negated()
        for x in pts:
            assert evaluate(compose(g, gi, e), e, x) == x == evaluate(compose(gi, g, e), e, x)


@pytest.mark.parametrize("text", random_texts(22, 15))
def test_phi_injective_at_truncation(text):
    e = P(text)
    periods = [n for n in truncated_periods(e, 3) if n > 1]
    order = lcm(*periods) if periods else 1
    seen = {}
    for j in range(min(order, 40)):
        el = LimitElement(F, ResidueSystem.of({n: j % n for n in periods}))
        key = tuple(evaluate(el, e, x) for x in enumerate_points(e, 3))
        assert key not in seen
        seen[key] = j


def test_idempotent_is_identity():
    for text in ["tower(cycle(2^n))", "sum(cycle(4),tower(cycle(3)))", "cycleof(tower(cycle(1*n+1)),2)"]:
        e = P(text)
        z = LimitElement(F, ResidueSystem.constant(0))
        assert equal(compose(z, z, e), z, e, depth=5)
        assert equal(z, identity(), e, depth=5)


CATALOG = ["cycle(3)", "sum(cycle(2),cycle(3))", "tower(cycle(2))", "cycleof(tower(cycle(3)),2)", "shift2", "ishift", "sum(cycle(2),shift2)", "cycleof(ishift,3)"]


@pytest.mark.parametrize("text", CATALOG)
def test_limit_elements_reproduced_by_oracle(text):
    e = P(text)
    for side in (F, B):
        for a in (0, 1, 5):
            el = LimitElement(side, ResidueSystem.constant(a))
            for x in enumerate_points(e, 4):
                p = period(e, x)
                n = p.k if isinstance(p, Finite) else 6
                spec = oracle.Congruences(((n, a % n),))
                got = oracle.p_iterate_limit(e, x, spec, m_max=max(64, 6 * n), backward=side is B)
                assert isinstance(got, oracle.Stabilized), (x, side, a)
                assert got.point == evaluate(el, e, x)


def test_no_involution_survives_the_two_adic_limit():
    """With periods {1, 2, 4, ...} each truncation is cyclic of order 2^D and
    has exactly one involution, but that involution restricts to the identity
    on the previous level.  So no element of order 2 is coherent across all
    levels, and the natural candidate rule r(2^k) = 2^(k-1) is not realizable.
    """
    e = P("tower(cycle(2^n))")
    for depth in range(1, 6):
        pts = enumerate_points(e, depth)
        clo = oracle.pointwise_closure(e, pts, 2**depth)
        assert clo.exact and len(clo) == 2**depth
        ident = oracle.table_of(lambda x: x, clo.tables[0].domain)
        invol = [t for t in clo.tables if t != ident and t.compose(t) == ident]
        assert len(invol) == 1
        lower = {x for x in pts if x.path[0] == "*" or x.path[0] < depth}
        assert all(invol[0](x) == x for x in lower)
    assert not realizable(parse_residues("2^n:g(n)/2"))


def test_inverse_formula_holds_on_grammar():
    """``(f^p)^-1 = (f^-1)^p`` checked pointwise by the oracle on the
    grammar's all-periodic systems."""
    for text in random_texts(23, 10):
        e = P(text)
        for x in enumerate_points(e, 3):
            n = period(e, x).k
            for r in range(n):
                fwd = oracle.p_iterate_limit(e, x, oracle.Congruences(((n, r),)), 5 * n + 8)
                back = oracle.p_iterate_limit(e, fwd.point, oracle.Congruences(((n, r),)), 5 * n + 8, backward=True)
                assert back.point == x
