"""Symbolic enveloping (Ellis) semigroup of a presented cascade.

An element is either a principal power ``f^m`` or a limit element
``f^p`` / ``(f^-1)^p`` for a non-principal ultrafilter ``p``.  Ultrafilters
are never built: on these spaces ``f^p`` is determined by which class
``nN + r`` contains ``p`` for each relevant modulus ``n`` (a period, or the
copy count in front of a ``shift2``/``ishift``), together with the direction.
Composition follows ``compose(g, h)(x) = g(h(x))``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from math import lcm
from typing import Optional, Union

from .dynamics import (
    Aperiodic,
    Finite,
    aperiodic_leaves,
    copy_modulus,
    is_all_periodic,
    leaf_generator,
    period,
    period_set,
    truncated_periods,
)
from .presentation import (
    INF,
    MINUS_INF,
    PLUS_INF,
    CascadeExpr,
    IShift,
    Point,
    Shift2,
    apply_inverse,
    apply_power,
    cb_rank_point,
    distance,
    enumerate_points,
    point_key,
)
from .residues import (
    MalformedResidue,
    ResidueSystem,
    TailRule,
    UnderdeterminedResidue,
    format_residues,
    parse_residues,
    realizable,
)


class Side(enum.Enum):
    FORWARD = "+"
    BACKWARD = "-"

    def flipped(self) -> "Side":
        return Side.BACKWARD if self is Side.FORWARD else Side.FORWARD


@dataclass(frozen=True)
class PrincipalPower:
    m: int


@dataclass(frozen=True)
class LimitElement:
    """``f^p`` (FORWARD) or ``(f^-1)^p`` (BACKWARD) where ``p`` lies in the
    class ``nN + residues[n]`` for every modulus ``n`` the residues fix."""

    side: Side
    residues: ResidueSystem

    @property
    def effective(self) -> ResidueSystem:
        """Residues of the power actually applied to periodic points."""
        return self.residues if self.side is Side.FORWARD else self.residues.negated()


EllisElement = Union[PrincipalPower, LimitElement]


class NotInvertible(ValueError):
    pass


def limit_from_effective(side: Side, eff: ResidueSystem) -> LimitElement:
    return LimitElement(side, eff if side is Side.FORWARD else eff.negated())


def _effective(e: EllisElement) -> ResidueSystem:
    if isinstance(e, PrincipalPower):
        return ResidueSystem.constant(e.m)
    return e.effective


# --------------------------------------------------------------------------
# text form


def format_element(e: EllisElement) -> str:
    if isinstance(e, PrincipalPower):
        return "id" if e.m == 0 else f"f^{e.m}"
    return f"lim{e.side.value}[{format_residues(e.residues)}]"


def parse_element(text: str) -> EllisElement:
    """``id``, ``f``, ``f^-3``, ``lim+[4:1,*:0]``, ``lim-[]``."""
    t = re.sub(r"\s+", "", text)
    if t == "id":
        return PrincipalPower(0)
    if t == "f":
        return PrincipalPower(1)
    m = re.fullmatch(r"f\^(-?\d+)", t)
    if m:
        return PrincipalPower(int(m[1]))
    m = re.fullmatch(r"lim([+-])\[(.*)\]", t)
    if m:
        return LimitElement(Side(m[1]), parse_residues(m[2]))
    raise MalformedResidue(f"bad element {text!r}; expected id, f^m, lim+[...] or lim-[...]")


# --------------------------------------------------------------------------
# evaluation


def _limit_token(gen, side: Side):
    if isinstance(gen, IShift):
        return INF
    return PLUS_INF if side is Side.FORWARD else MINUS_INF


def evaluate(e: EllisElement, expr: CascadeExpr, x: Point) -> Point:
    """Value of the element at ``x``.

    A periodic point of period ``n`` goes to ``f^(+-r_n)(x)``.  A point of an
    aperiodic orbit first moves through its copies by the residue modulo the
    copy count and then runs off to the end its orbit converges to in the
    element's direction.
    """
    if isinstance(e, PrincipalPower):
        return apply_power(expr, x, e.m)
    sign = 1 if e.side is Side.FORWARD else -1
    p = period(expr, x)
    if isinstance(p, Finite):
        return apply_power(expr, x, sign * e.residues.require(p.k))
    m = copy_modulus(expr, x)
    y = apply_power(expr, x, sign * e.residues.require(m))
    return Point(y.path[:-1] + (_limit_token(leaf_generator(expr, x), e.side),))


def catalog_values(e: EllisElement, expr: CascadeExpr) -> dict[str, str]:
    """What a limit element does on each aperiodic component: ``Plus``/``Minus``
    on a ``shift2`` and ``ConstInfinity`` on an ``ishift``."""
    if isinstance(e, PrincipalPower):
        return {}
    out = {}
    for prefix, gen, _ in aperiodic_leaves(expr):
        key = ".".join(map(str, prefix)) or "<root>"
        if isinstance(gen, IShift):
            out[key] = "ConstInfinity"
        else:
            out[key] = "Plus" if e.side is Side.FORWARD else "Minus"
    return out


# --------------------------------------------------------------------------
# algebra


def compose(g: EllisElement, h: EllisElement, expr: CascadeExpr, check_depth: Optional[int] = 2) -> EllisElement:
    """``g o h``.  Powers add; limit elements add their effective residues and
    take the direction of the inner limit element, since the inner map already
    sends aperiodic orbits to an end that the outer one keeps fixed.

    With ``check_depth`` set, the result is compared pointwise with the
    composition of evaluations on the points enumerated at that depth.
    """
    if isinstance(g, PrincipalPower) and isinstance(h, PrincipalPower):
        out: EllisElement = PrincipalPower(g.m + h.m)
    else:
        side = h.side if isinstance(h, LimitElement) else g.side
        out = limit_from_effective(side, _effective(g) + _effective(h))
    if check_depth is not None:
        for x in enumerate_points(expr, check_depth):
            try:
                want = evaluate(g, expr, evaluate(h, expr, x))
            except UnderdeterminedResidue:
                continue
            if evaluate(out, expr, x) != want:
                raise RuntimeError(f"composition disagrees with evaluation at {x}")
    return out


def inverse(e: EllisElement, expr: CascadeExpr) -> EllisElement:
    """``(f^p)^-1 = (f^-1)^p``: flip the direction and keep ``p``."""
    if isinstance(e, PrincipalPower):
        return PrincipalPower(-e.m)
    if not is_all_periodic(expr):
        raise NotInvertible("limit elements of a presentation with aperiodic points are not injective")
    return LimitElement(e.side.flipped(), e.residues)


def identity() -> EllisElement:
    return PrincipalPower(0)


def images(e: EllisElement, expr: CascadeExpr, points) -> tuple:
    return tuple(evaluate(e, expr, x) for x in points)


def equal(g: EllisElement, h: EllisElement, expr: CascadeExpr, depth: int = 8) -> bool:
    """Extensional equality on the points enumerated at ``depth``."""
    pts = enumerate_points(expr, depth)
    return images(g, expr, pts) == images(h, expr, pts)


def is_bijective_at_truncation(e: EllisElement, expr: CascadeExpr, depth: int) -> bool:
    pts = enumerate_points(expr, depth)
    img = images(e, expr, pts)
    return len(set(img)) == len(pts) and set(img) == set(pts)


def find_noninjective_pair(e: EllisElement, expr: CascadeExpr, depth: int) -> Optional[tuple]:
    seen = {}
    for x in enumerate_points(expr, depth):
        y = evaluate(e, expr, x)
        if y in seen:
            return (seen[y], x, y)
        seen[y] = x
    return None


def noninjective_witness(expr: CascadeExpr, side: Side = Side.FORWARD) -> Optional[tuple]:
    """A limit element and two distinct points it sends to the same place.

    On a ``shift2`` the forward limit sends ``0`` and ``5`` to ``+oo`` (the
    backward one sends ``0`` and ``-5`` to ``-oo``); on an ``ishift`` every
    limit element sends ``x_0`` and ``x_1`` to ``oo``.  ``None`` when every
    point is periodic.
    """
    leaves = aperiodic_leaves(expr)
    if not leaves:
        return None
    prefix, gen, _ = leaves[0]
    el = LimitElement(side, ResidueSystem.constant(0))
    if isinstance(gen, Shift2):
        a, b = Point(prefix + (0,)), Point(prefix + (5 if side is Side.FORWARD else -5,))
    else:
        a, b = Point(prefix + (0,)), Point(prefix + (1,))
    ya, yb = evaluate(el, expr, a), evaluate(el, expr, b)
    if ya != yb:
        raise RuntimeError("limit element failed to collapse the witness pair")
    return (el, a, b, ya)


# --------------------------------------------------------------------------
# E(N) = E(Z)


@dataclass(frozen=True)
class Equal:
    """``f^-1`` is a limit of forward iterates: ``witness`` evaluates like it."""

    witness: LimitElement


@dataclass(frozen=True)
class NotEqual:
    witness: Point


def inverse_residues(expr: CascadeExpr) -> ResidueSystem:
    """``r_n = n - 1`` on every period: realizable, and acts as ``f^-1``."""
    ps = period_set(expr)
    explicit = {n: n - 1 for n in ps.explicit if n > 1}
    tail = None if ps.is_finite() else TailRule(None, 0, -1)
    return ResidueSystem.of(explicit, tail)


def en_equals_ez(expr: CascadeExpr, depth: int = 6) -> Union[Equal, NotEqual]:
    if not is_all_periodic(expr):
        prefix = aperiodic_leaves(expr)[0][0]
        return NotEqual(Point(prefix + (0,)))
    rs = inverse_residues(expr)
    if not realizable(rs, period_set(expr)):
        raise RuntimeError("n-1 residues should always be realizable")
    w = LimitElement(Side.FORWARD, rs)
    for x in enumerate_points(expr, depth):
        if evaluate(w, expr, x) != apply_inverse(expr, x):
            raise RuntimeError(f"witness differs from the inverse at {x}")
    return Equal(w)


# --------------------------------------------------------------------------
# continuity at truncation


def is_continuous_at_truncation(e: EllisElement, expr: CascadeExpr, depth: int) -> bool:
    """Heuristic continuity test on the points enumerated at ``depth``.

    For each limit point ``x``, its nearest enumerated neighbours ``y`` (at
    distance ``2^-k``) must satisfy ``d(e(y), e(x)) <= 2^-(k//2)``.  Powers
    of ``f`` are homeomorphisms and are not tested.
    """
    if isinstance(e, PrincipalPower):
        return True
    pts = enumerate_points(expr, depth)
    for x in pts:
        if cb_rank_point(expr, x) == 0:
            continue
        ds = [(distance(expr, x, y), y) for y in pts if y != x]
        dmin = min(d for d, _ in ds)
        k = dmin.denominator.bit_length() - 1
        ex = evaluate(e, expr, x)
        for d, y in ds:
            if d == dmin and distance(expr, evaluate(e, expr, y), ex) * 2 ** (k // 2) > 1:
                return False
    return True


# --------------------------------------------------------------------------
# truncated semigroup tables


@dataclass
class SemigroupTable:
    labels: list
    elements: list
    table: list  # table[i][j] = index of elements[i] o elements[j], or None
    continuous: list
    depth: int

    @property
    def closed(self) -> bool:
        return all(v is not None for row in self.table for v in row)

    @property
    def commutative(self) -> bool:
        return self.noncommuting_pair() is None

    def noncommuting_pair(self) -> Optional[tuple]:
        n = len(self.elements)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = self.table[i][j], self.table[j][i]
                if a is not None and b is not None and a != b:
                    return (i, j)
        return None

    def is_associative(self) -> bool:
        n, t = len(self.elements), self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    bc = t[b][c]
                    if ab is None or bc is None:
                        continue
                    left, right = t[ab][c], t[a][bc]
                    if left is not None and right is not None and left != right:
                        return False
        return True

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def format(self) -> str:
        w = max(len(s) for s in self.labels) + 1
        head = " " * w + "|" + "".join(s.rjust(w) for s in self.labels)
        rows = [head, "-" * len(head)]
        for i, lab in enumerate(self.labels):
            cells = ("." if v is None else self.labels[v] for v in self.table[i])
            rows.append(lab.rjust(w) + "|" + "".join(c.rjust(w) for c in cells))
        return "\n".join(rows)


def _power_label(m: int) -> str:
    return "id" if m == 0 else ("f" if m == 1 else f"f^{m}")


def truncated_semigroup(expr: CascadeExpr, depth: int = 8, bound: int = 2) -> SemigroupTable:
    """Composition table of the enveloping semigroup restricted to the
    periods seen at ``depth``.

    With every point periodic this is the cyclic group generated by the
    all-ones residue tuple, of order the lcm of those periods.  Otherwise it
    holds ``f^m`` for ``|m| <= bound`` and the limit elements; products that
    leave the listed powers are ``None``.
    """
    periods = truncated_periods(expr, depth)
    order = lcm(*periods) if periods else 1
    pts = enumerate_points(expr, depth)

    def residue_tuple(j):
        return ResidueSystem.of({n: j % n for n in periods if n > 1})

    elements, labels = [], []
    if is_all_periodic(expr):
        for j in range(order):
            elements.append(LimitElement(Side.FORWARD, residue_tuple(j)))
            labels.append(f"[{j}]")
    else:
        for m in range(-bound, bound + 1):
            elements.append(PrincipalPower(m))
            labels.append(_power_label(m))
        sides = [Side.FORWARD]
        if any(isinstance(g, Shift2) for _, g, _ in aperiodic_leaves(expr)):
            sides.append(Side.BACKWARD)
        only_ishift = len(sides) == 1
        seen = {images(e, expr, pts) for e in elements}
        for side in sides:
            for j in range(order):
                el = LimitElement(side, residue_tuple(j))
                key = images(el, expr, pts)
                if key in seen:
                    continue
                seen.add(key)
                base = "oo" if only_ishift else f"f{side.value}"
                elements.append(el)
                labels.append(base if order == 1 else f"{base}[{j}]")

    keys = {images(e, expr, pts): i for i, e in enumerate(elements)}
    table = []
    for g in elements:
        row = []
        for h in elements:
            c = compose(g, h, expr, check_depth=None)
            row.append(keys.get(images(c, expr, pts)))
        table.append(row)
    cont = [is_continuous_at_truncation(e, expr, min(depth, 8)) for e in elements]
    return SemigroupTable(labels, elements, table, cont, depth)


# --------------------------------------------------------------------------
# WAP and commutativity


@dataclass(frozen=True)
class Wap:
    depth: int


@dataclass(frozen=True)
class NotWap:
    """``element`` maps ``sequence -> limit`` to ``images`` whose limit differs
    from ``element(limit)``."""

    element: LimitElement
    sequence: tuple
    limit: Point
    images: tuple
    limit_image: Point


def is_wap(expr: CascadeExpr, depth: int = 8) -> Union[Wap, NotWap]:
    """Are all elements of the enveloping semigroup continuous?

    A ``shift2`` anywhere breaks continuity: ``f^+`` sends ``-k`` to ``+oo``
    while fixing ``-oo``.  Otherwise the limit elements are checked on the
    truncation.
    """
    for prefix, gen, _ in aperiodic_leaves(expr):
        if isinstance(gen, Shift2):
            el = LimitElement(Side.FORWARD, ResidueSystem.constant(0))
            seq = tuple(Point(prefix + (-k,)) for k in range(1, depth + 1))
            lim = Point(prefix + (MINUS_INF,))
            imgs = images(el, expr, seq)
            lim_img = evaluate(el, expr, lim)
            far = [distance(expr, y, lim_img) for y in imgs]
            if min(far) == 0 or distance(expr, seq[-1], lim) >= far[-1]:
                raise RuntimeError("non-WAP witness failed to separate")
            return NotWap(el, seq, lim, imgs, lim_img)
    periods = truncated_periods(expr, depth)
    order = lcm(*periods) if periods else 1
    for side in Side:
        for j in sorted({0, 1, order - 1}):
            el = LimitElement(side, ResidueSystem.of({n: j % n for n in periods if n > 1}))
            if not is_continuous_at_truncation(el, expr, depth):
                raise RuntimeError(f"limit element {format_element(el)} looks discontinuous")
    return Wap(depth)


@dataclass(frozen=True)
class Abelian:
    size: int


@dataclass(frozen=True)
class NotAbelian:
    pair: tuple  # (label, label)
    elements: tuple


def is_abelian_truncated(expr: CascadeExpr, depth: int = 8, bound: int = 2) -> Union[Abelian, NotAbelian]:
    t = truncated_semigroup(expr, depth, bound)
    pair = t.noncommuting_pair()
    if pair is None:
        return Abelian(len(t.elements))
    i, j = pair
    return NotAbelian((t.labels[i], t.labels[j]), (t.elements[i], t.elements[j]))


def sorted_points(points) -> list[Point]:
    return sorted(points, key=point_key)
