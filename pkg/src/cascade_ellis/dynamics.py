"""Orbits, periods, period sets, maximal-rank and minimal sets, and the
classifier for the six equivalent conditions (equicontinuous, distal, every
point periodic, some non-principal ``f^p`` a homeomorphism, uniform return
times, ``E(N) = E(Z)``)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Union

from .presentation import (
    INF,
    LEFT,
    MINUS_INF,
    PLUS_INF,
    RIGHT,
    STAR,
    CascadeExpr,
    Cycle,
    CycleFamily,
    CycleOf,
    Formula,
    IShift,
    Point,
    Shift2,
    Sum,
    Tower,
    apply_map,
    apply_power,
    cb_rank_point,
    check_point,
    distance,
    enumerate_points,
    format_cascade,
    formula_contains,
    formula_members,
    max_point_rank,
    point_key,
)


class NotAllPeriodic(ValueError):
    """The operation needs a presentation in which every point is periodic."""


@dataclass(frozen=True)
class Finite:
    k: int

    def __str__(self):
        return str(self.k)


@dataclass(frozen=True)
class _Aperiodic:
    def __str__(self):
        return "aperiodic"


Aperiodic = _Aperiodic()
PeriodResult = Union[Finite, _Aperiodic]


def _sub(e, t):
    if isinstance(e, Sum):
        return e.left if t == LEFT else e.right
    if isinstance(e, CycleOf):
        return e.base
    return e.piece(t)


def _period(e, path) -> Optional[int]:
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return e.k
    if isinstance(e, Shift2):
        return 1 if t in (PLUS_INF, MINUS_INF) else None
    if isinstance(e, IShift):
        return 1 if t == INF else None
    if isinstance(e, CycleOf):
        p = _period(e.base, rest)
        return None if p is None else e.m * p
    if isinstance(e, Tower) and t == STAR:
        return 1
    return _period(_sub(e, t), rest)


def period(e: CascadeExpr, x: Point) -> PeriodResult:
    """Least ``k >= 1`` with ``f^k(x) = x``, read off the expression tree."""
    check_point(e, x)
    p = _period(e, x.path)
    return Aperiodic if p is None else Finite(p)


def copy_modulus(e: CascadeExpr, x: Point) -> int:
    """Product of the ``cycleof`` multiplicities on the way to ``x``.

    ``f`` raised to this power acts on the innermost generator of ``x`` with
    every copy index left in place."""
    m, node = 1, e
    for t in x.path[:-1]:
        if isinstance(node, CycleOf):
            m *= node.m
        if isinstance(node, Tower) and t == STAR:
            break
        node = _sub(node, t)
    return m


def leaf_generator(e: CascadeExpr, x: Point) -> CascadeExpr:
    node = e
    for t in x.path[:-1]:
        node = _sub(node, t)
    return node


def is_all_periodic(e: CascadeExpr) -> bool:
    """Structural test: only cycles, towers, sums and cycleofs occur."""
    if isinstance(e, Cycle):
        return True
    if isinstance(e, (Shift2, IShift)):
        return False
    if isinstance(e, Sum):
        return is_all_periodic(e.left) and is_all_periodic(e.right)
    if isinstance(e, CycleOf):
        return is_all_periodic(e.base)
    return all(is_all_periodic(h) for h in e.head) and is_all_periodic(e.tail_piece())


def aperiodic_leaves(e: CascadeExpr, prefix: tuple = ()) -> list[tuple[tuple, CascadeExpr, Fraction]]:
    """Every occurrence of ``shift2``/``ishift`` as (address prefix, generator,
    metric scale), taking copy 0 and the first tail piece as representatives."""
    out = []
    if isinstance(e, (Shift2, IShift)):
        out.append((prefix, e, Fraction(1)))
    elif isinstance(e, Sum):
        out += aperiodic_leaves(e.left, prefix + (LEFT,))
        out += aperiodic_leaves(e.right, prefix + (RIGHT,))
    elif isinstance(e, CycleOf):
        out += aperiodic_leaves(e.base, prefix + (0,))
    elif isinstance(e, Tower):
        for n in range(len(e.head) + 1):
            for p, g, s in aperiodic_leaves(e.piece(n), prefix + (n,)):
                out.append((p, g, s / 2 ** (n + 1)))
    return out


# --------------------------------------------------------------------------
# period sets


@dataclass(frozen=True)
class PeriodSetSpec:
    """``explicit`` periods plus ``tails``: pairs ``(g, start)`` contributing
    ``g(n)`` for every ``n >= start``.  ``partial`` marks presentations with
    aperiodic points, whose periods cover only the periodic part."""

    explicit: frozenset = frozenset()
    tails: tuple = ()
    partial: bool = False

    def contains(self, n: int) -> bool:
        return n in self.explicit or any(formula_contains(g, s, n) for g, s in self.tails)

    __contains__ = contains

    def members(self, bound: int) -> list[int]:
        out = {n for n in self.explicit if n <= bound}
        for g, s in self.tails:
            out.update(formula_members(g, s, bound))
        return sorted(out)

    def is_finite(self) -> bool:
        return not self.tails

    def __str__(self):
        parts = [str(n) for n in sorted(self.explicit)]
        parts += [f"{g.text()} (n>={s})" for g, s in self.tails]
        return "{" + ", ".join(parts) + "}" + (" partial" if self.partial else "")


def _is_constant(g: Formula) -> bool:
    from .presentation import Const, Geometric, Linear

    return isinstance(g, Const) or (isinstance(g, Linear) and g.a == 0) or (
        isinstance(g, Geometric) and g.r == 1
    )


def _scale_tail(g: Formula, start: int, m: int):
    return (g.scaled(m), start)


def period_set(e: CascadeExpr) -> PeriodSetSpec:
    """The set of periods of periodic points, kept symbolic."""
    if isinstance(e, Cycle):
        return PeriodSetSpec(frozenset({e.k}))
    if isinstance(e, (Shift2, IShift)):
        return PeriodSetSpec(frozenset({1}), (), True)
    if isinstance(e, Sum):
        a, b = period_set(e.left), period_set(e.right)
        return PeriodSetSpec(a.explicit | b.explicit, _dedupe(a.tails + b.tails), a.partial or b.partial)
    if isinstance(e, CycleOf):
        a = period_set(e.base)
        return PeriodSetSpec(
            frozenset(e.m * n for n in a.explicit),
            tuple(_scale_tail(g, s, e.m) for g, s in a.tails),
            a.partial,
        )
    explicit, tails, partial = {1}, [], False
    for h in e.head:
        a = period_set(h)
        explicit |= a.explicit
        tails += a.tails
        partial |= a.partial
    if isinstance(e.tail, CycleFamily):
        g = e.tail.formula
        if _is_constant(g):
            explicit.add(g(len(e.head)))
        else:
            tails.append((g, len(e.head)))
    else:
        a = period_set(e.tail.tower)
        explicit |= a.explicit
        tails += a.tails
        partial |= a.partial
    return PeriodSetSpec(frozenset(explicit), _dedupe(tuple(tails)), partial)


def _dedupe(tails: tuple) -> tuple:
    out = []
    for t in tails:
        if t not in out:
            out.append(t)
    return tuple(out)


def truncated_periods(e: CascadeExpr, depth: int) -> list[int]:
    """Periods realised by the points enumerated at ``depth``."""
    return sorted({p.k for p in (period(e, x) for x in enumerate_points(e, depth)) if isinstance(p, Finite)})


# --------------------------------------------------------------------------
# orbits and invariant sets


def orbit(e: CascadeExpr, x: Point, bound: int) -> list[Point]:
    """The first ``min(bound, period)`` forward iterates, starting at ``x``."""
    check_point(e, x)
    out, y = [], x
    for _ in range(bound):
        out.append(y)
        y = apply_map(e, y)
        if y == x:
            break
    return out


def _rank_paths(e, r: int, prefix: tuple = ()) -> list[tuple]:
    if isinstance(e, Cycle):
        return [prefix + (i,) for i in range(e.k)] if r == 0 else []
    if isinstance(e, Shift2):
        return [prefix + (MINUS_INF,), prefix + (PLUS_INF,)] if r == 1 else []
    if isinstance(e, IShift):
        return [prefix + (INF,)] if r == 1 else []
    if isinstance(e, Sum):
        return _rank_paths(e.left, r, prefix + (LEFT,)) + _rank_paths(e.right, r, prefix + (RIGHT,))
    if isinstance(e, CycleOf):
        return [p for c in range(e.m) for p in _rank_paths(e.base, r, prefix + (c,))]
    out = []
    for n, h in enumerate(e.head):
        out += _rank_paths(h, r, prefix + (n,))
    # tail pieces have rank below the limit point's, which is at most r
    if 1 + max_point_rank(e.tail_piece()) == r:
        out.append(prefix + (STAR,))
    return out


def max_rank_set(e: CascadeExpr) -> list[Point]:
    """Points of maximal Cantor-Bendixson rank: a finite invariant set of
    periodic points."""
    r = max_point_rank(e)
    pts = [Point(p) for p in _rank_paths(e, r)]
    s = set(pts)
    if not pts or {apply_map(e, x) for x in pts} != s:
        raise RuntimeError("maximal-rank set is not invariant")
    if any(period(e, x) is Aperiodic for x in pts):
        raise RuntimeError("maximal-rank set contains an aperiodic point")
    return pts


@dataclass(frozen=True)
class MinimalSets:
    """Minimal sets found at a truncation depth.

    ``orbits`` lists every periodic orbit among the enumerated points;
    ``families`` describes the infinitely many further orbits carried by
    tower tails beyond the depth, one line per tail.
    """

    orbits: tuple
    families: tuple
    depth: int

    @property
    def complete(self) -> bool:
        return not self.families


def _tail_families(e, prefix: str, depth: int) -> list[str]:
    if isinstance(e, Sum):
        return _tail_families(e.left, prefix + "L.", depth) + _tail_families(e.right, prefix + "R.", depth)
    if isinstance(e, CycleOf):
        return _tail_families(e.base, prefix + "<copy>.", depth)
    if not isinstance(e, Tower):
        return []
    out = []
    for n, h in enumerate(e.head):
        out += _tail_families(h, f"{prefix}{n}.", depth)
    first = max(depth + 1, len(e.head))
    kind = (
        f"cycle({e.tail.formula.text()})" if isinstance(e.tail, CycleFamily) else format_cascade(e.tail.tower)
    )
    out.append(f"{prefix}n for n >= {first}: orbits of {kind}")
    return out


def minimal_sets(e: CascadeExpr, depth: int = 8) -> MinimalSets:
    """Every minimal set is the orbit of a periodic point; list them."""
    seen, orbits = set(), []
    for x in enumerate_points(e, depth):
        if x in seen or period(e, x) is Aperiodic:
            continue
        orb = orbit(e, x, period(e, x).k)
        _check_minimal(e, orb)
        seen.update(orb)
        orbits.append(tuple(orb))
    return MinimalSets(tuple(orbits), tuple(_tail_families(e, "", depth)), depth)


def _check_minimal(e, orb) -> None:
    s = set(orb)
    if {apply_map(e, y) for y in orb} != s:
        raise RuntimeError(f"orbit of {orb[0]} is not invariant")
    # no proper invariant subset: the forward orbit of each member is all of s
    for y in orb:
        if len(orbit(e, y, len(orb) + 1)) != len(s):
            raise RuntimeError(f"orbit of {orb[0]} is not minimal")


# --------------------------------------------------------------------------
# classification


@dataclass
class Classification:
    """Verdicts for the six conditions together with their evidence.

    Verdicts are computed from independent evidence, so their agreement is a
    check rather than an assumption.
    """

    expression: str
    all_periodic: bool
    equicontinuous: bool
    distal: bool
    fp_homeo_exists: bool
    uniform_bound_exists: bool
    en_eq_ez: bool
    depth: int
    iter_bound: int
    witness_aperiodic_point: Optional[Point] = None
    witness_noninjective: Optional[tuple] = None  # (element, x, y, image)
    witness_equicont_failure: Optional[tuple] = None  # (x, y, n, eps)
    witness_uniform_failure: Optional[tuple] = None  # (x, eps)
    uniform_bound: Optional[int] = None
    modulus: Optional[tuple] = None  # (eps, delta)
    homeomorphism: Optional[object] = None
    en_eq_ez_witness: Optional[object] = None
    notes: list = field(default_factory=list)

    VERDICTS = ("equicontinuous", "distal", "all_periodic", "fp_homeo_exists", "uniform_bound_exists", "en_eq_ez")

    def verdicts(self) -> dict[str, bool]:
        return {k: getattr(self, k) for k in self.VERDICTS}

    @property
    def consistent(self) -> bool:
        return len(set(self.verdicts().values())) == 1

    def report(self) -> str:
        from .ellis import format_element

        lines = [f"expression: {self.expression}"]
        for k, v in self.verdicts().items():
            lines.append(f"{k}: {str(v).lower()}")
        lines.append(f"consistent: {str(self.consistent).lower()}")
        lines.append(f"bounds: depth={self.depth} iter_bound={self.iter_bound}")
        if self.uniform_bound is not None:
            lines.append(f"uniform_bound_l: {self.uniform_bound} (eps=1/2)")
        if self.modulus is not None:
            lines.append(f"modulus: eps={self.modulus[0]} delta={self.modulus[1]}")
        if self.homeomorphism is not None:
            lines.append(f"homeomorphism: {format_element(self.homeomorphism)}")
        if self.en_eq_ez_witness is not None:
            lines.append(f"inverse_as_limit: {format_element(self.en_eq_ez_witness)}")
        if self.witness_aperiodic_point is not None:
            lines.append(f"witness_aperiodic_point: {self.witness_aperiodic_point}")
        if self.witness_noninjective is not None:
            el, x, y, img = self.witness_noninjective
            lines.append(f"witness_noninjective: {format_element(el)} maps {x} and {y} to {img}")
        if self.witness_equicont_failure is not None:
            x, y, n, eps = self.witness_equicont_failure
            lines.append(f"witness_equicont_failure: x={x} y={y} n={n} eps={eps}")
        if self.witness_uniform_failure is not None:
            x, eps = self.witness_uniform_failure
            lines.append(f"witness_uniform_failure: x={x} moves at least eps={eps} under every f^l, l>=1")
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def classify(e: CascadeExpr, depth: int = 8, iter_bound: int = 256) -> Classification:
    """Decide the six conditions and collect witnesses.

    ``depth`` and ``iter_bound`` bound the searches for failure witnesses and
    the truncated verification of positive answers.
    """
    from . import ellis, equicont

    text = format_cascade(e)
    all_periodic = is_all_periodic(e)
    check_depth = min(depth, 4)
    if all_periodic:
        half = Fraction(1, 2)
        ub = equicont.uniform_period_bound(e, half, verify_depth=check_depth, verify_n=16)
        mod = equicont.equicontinuity_modulus(e, half, verify_depth=min(depth, 3), verify_m=16)
        ident = ellis.LimitElement(ellis.Side.FORWARD, ellis.ResidueSystem.constant(0))
        homeo = ident if ellis.is_bijective_at_truncation(ident, e, check_depth) else None
        inj_fail = ellis.find_noninjective_pair(ident, e, check_depth)
        en = ellis.en_equals_ez(e, depth=check_depth)
        return Classification(
            text,
            all_periodic=True,
            equicontinuous=mod is not None,
            distal=inj_fail is None,
            fp_homeo_exists=homeo is not None,
            uniform_bound_exists=ub is not None,
            en_eq_ez=isinstance(en, ellis.Equal),
            depth=depth,
            iter_bound=iter_bound,
            uniform_bound=ub.l,
            modulus=(mod.epsilon, mod.delta),
            homeomorphism=homeo,
            en_eq_ez_witness=getattr(en, "witness", None),
        )

    prefix, gen, scale = aperiodic_leaves(e)[0]
    x0 = Point(prefix + (0,))
    # (b) a non-principal limit element collapsing two points
    nonin = ellis.noninjective_witness(e)
    # (c) bounded search for an equicontinuity failure inside the aperiodic part
    eps = scale / 2
    fail = equicont.equicontinuity_failure_witness(e, eps, depth, iter_bound, within=prefix)
    # (iv) every limit element is non-injective: both sides collapse a pair
    collapsing = [ellis.noninjective_witness(e, side) for side in ellis.Side]
    fp_homeo = any(w is None for w in collapsing)
    # (v) an aperiodic point moves by at least eps under every f^l
    moved = all(distance(e, x0, apply_power(e, x0, l)) >= eps for l in range(1, iter_bound + 1))
    en = ellis.en_equals_ez(e, depth=min(depth, 4))
    notes = []
    if fail is None:
        notes.append("no equicontinuity failure found within bounds")
    return Classification(
        text,
        all_periodic=False,
        equicontinuous=fail is None,
        distal=nonin is None,
        fp_homeo_exists=fp_homeo,
        uniform_bound_exists=not moved,
        en_eq_ez=isinstance(en, ellis.Equal),
        depth=depth,
        iter_bound=iter_bound,
        witness_aperiodic_point=x0,
        witness_noninjective=nonin,
        witness_equicont_failure=None if fail is None else fail + (eps,),
        witness_uniform_failure=(x0, eps) if moved else None,
        notes=notes,
    )


def cb_ranks(e: CascadeExpr, depth: int) -> dict[Point, int]:
    return {x: cb_rank_point(e, x) for x in enumerate_points(e, depth)}


def sorted_points(points) -> list[Point]:
    return sorted(points, key=point_key)
