"""Uniform return times, equicontinuity moduli and bounded searches for
equicontinuity failures.

Every positive result is re-verified on a finite truncation before it is
returned; every failure triple is re-evaluated before it is emitted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional

from .dynamics import NotAllPeriodic, Finite, is_all_periodic, period
from .presentation import (
    CascadeExpr,
    Cycle,
    CycleOf,
    IShift,
    Point,
    Shift2,
    Sum,
    apply_map,
    apply_power,
    distance,
    enumerate_points,
    point_key,
)
from .presentation import _exp


def parse_dyadic(text: str) -> Fraction:
    """``"1"``, ``"1/8"``, ``"1/2^3"`` or ``"3/2^4"`` to a positive dyadic."""
    t = text.replace(" ", "")
    m = re.fullmatch(r"(\d+)(?:/(?:(\d+)|2\^(\d+)))?", t)
    if not m:
        raise ValueError(f"not a dyadic rational: {text!r}")
    den = 1
    if m[2] is not None:
        den = int(m[2])
    elif m[3] is not None:
        den = 2 ** int(m[3])
    if den == 0 or den & (den - 1):
        raise ValueError(f"denominator of {text!r} is not a power of two")
    value = Fraction(int(m[1]), den)
    if value <= 0:
        raise ValueError("epsilon must be positive")
    return value


def format_dyadic(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class UniformBound:
    """``d(x, f^(n*l)(x)) < epsilon`` for every ``x`` and ``n``.

    ``covering`` lists (centre, period, radius) for the balls that force
    factors into ``l``; balls of radius below ``epsilon`` force nothing.
    """

    epsilon: Fraction
    l: int
    covering: tuple


@dataclass(frozen=True)
class Modulus:
    """``d(x, y) < delta`` implies ``d(f^m x, f^m y) < epsilon`` for all ``m``.

    Built as in the three-term estimate: ``eta = epsilon/4`` (a dyadic below
    ``epsilon/3``), ``l = l(eta)``, and ``delta <= eta`` controlling
    ``f^0 .. f^(l-1)``; then ``f^m = f^(n*l) f^i`` keeps every term below
    ``eta``.
    """

    epsilon: Fraction
    delta: Fraction
    eta: Fraction
    l: int


def _first_point(e, prefix) -> tuple:
    return enumerate_points(e, 0)[0].path if prefix is None else prefix + enumerate_points(e, 0)[0].path


def _need(e, s: Fraction, eps: Fraction, prefix: tuple) -> tuple[int, list]:
    if isinstance(e, (Shift2, IShift)):
        raise NotAllPeriodic("shift2 and ishift have aperiodic points")
    if s < eps:
        return 1, []
    if isinstance(e, Cycle):
        return e.k, [(prefix + (0,), s)]
    if isinstance(e, Sum):
        a, ca = _need(e.left, s, eps, prefix + ("L",))
        b, cb = _need(e.right, s, eps, prefix + ("R",))
        return lcm(a, b), ca + cb
    if isinstance(e, CycleOf):
        # copies are s apart, so l must run through all of them
        b, cov = _need(e.base, s, eps, prefix + (0,))
        if not cov:
            cov = [(prefix + _first_point(e.base, (0,)), s)]
        return e.m * b, cov
    l, cov, n = 1, [], 0
    while s / 2 ** (n + 1) >= eps:
        a, c = _need(e.piece(n), s / 2 ** (n + 1), eps, prefix + (n,))
        l, cov = lcm(l, a), cov + c
        n += 1
    return l, cov


def _require_periodic(e: CascadeExpr) -> None:
    if not is_all_periodic(e):
        raise NotAllPeriodic("every point must be periodic")


def uniform_period_bound(
    e: CascadeExpr, epsilon: Fraction, verify_depth: Optional[int] = 8, verify_n: int = 64
) -> UniformBound:
    """Least common multiple of the periods of the balls of diameter at
    least ``epsilon``.

    Pieces below ``epsilon`` are preserved by ``f`` and cannot move a point
    by ``epsilon``.  With ``verify_depth`` set, ``d(x, f^(n*l) x) < epsilon``
    is checked for every enumerated ``x`` and ``1 <= n <= verify_n``.
    """
    _require_periodic(e)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    l, cov = _need(e, Fraction(1), epsilon, ())
    covering = tuple((Point(c), period(e, Point(c)).k, r) for c, r in cov)
    ub = UniformBound(epsilon, l, covering)
    if verify_depth is not None:
        bad = check_uniform_bound(e, ub, verify_depth, verify_n)
        if bad is not None:
            raise RuntimeError(f"uniform bound l={l} fails at {bad}")
    return ub


def _cut(r: Fraction) -> int:
    """Least ``k`` with ``2**-k < r``: a distance ``2**-k`` is below ``r``
    exactly when ``k >= _cut(r)``."""
    k = 0
    while Fraction(1, 2**k) >= r:
        k += 1
    return k


def check_uniform_bound(e: CascadeExpr, ub: UniformBound, depth: int, n_max: int) -> Optional[tuple]:
    cut = _cut(ub.epsilon)
    for x in enumerate_points(e, depth):
        p = period(e, x).k
        for n in range(1, n_max + 1):
            k = _exp(e, x.path, apply_power(e, x, (n * ub.l) % p).path)
            if k is not None and k < cut:
                return (x, n)
    return None


def _delta(e, s: Fraction, eps: Fraction) -> Optional[Fraction]:
    """Largest radius below which pairs stay ``eps``-close under every iterate
    (``None``: no constraint)."""
    if isinstance(e, (Shift2, IShift)):
        raise NotAllPeriodic("shift2 and ishift have aperiodic points")
    if s < eps:
        return None
    if isinstance(e, Cycle):
        return s
    if isinstance(e, Sum):
        parts = [s, _delta(e.left, s, eps), _delta(e.right, s, eps)]
    elif isinstance(e, CycleOf):
        parts = [s, _delta(e.base, s, eps)]
    else:
        # the limit point and distinct pieces keep their mutual distances
        parts, n = [], 0
        while s / 2 ** (n + 1) >= eps:
            parts.append(_delta(e.piece(n), s / 2 ** (n + 1), eps))
            n += 1
    parts = [p for p in parts if p is not None]
    return min(parts) if parts else None


def equicontinuity_modulus(
    e: CascadeExpr, epsilon: Fraction, verify_depth: Optional[int] = 8, verify_m: int = 64
) -> Modulus:
    """A ``delta`` for ``epsilon`` following the three-term estimate.

    ``verify_depth`` turns on an exhaustive pair check over the enumerated
    points and ``|m| <= verify_m``.
    """
    _require_periodic(e)
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    eta = epsilon / 4
    l = uniform_period_bound(e, eta, verify_depth=None).l
    d0 = _delta(e, Fraction(1), eta)
    delta = eta if d0 is None else min(eta, d0)
    mod = Modulus(epsilon, delta, eta, l)
    if verify_depth is not None:
        bad = check_modulus(e, mod, verify_depth, verify_m)
        if bad is not None:
            raise RuntimeError(f"modulus delta={delta} fails at {bad}")
    return mod


def check_modulus(e: CascadeExpr, mod: Modulus, depth: int, m_max: int) -> Optional[tuple]:
    """Exhaustive pair check.  Every pair closer than ``delta`` is followed
    around its orbit under ``f x f``; with all points periodic that orbit
    covers every iterate ``m``, so ``m_max`` only caps orbits of pairs that
    somehow fail to close up."""
    pts = enumerate_points(e, depth)
    # enumerated points are valid and the set is f-invariant, so skip checks
    nxt = {x: apply_map(e, x) for x in pts}
    seen: set = set()
    cut = _cut(mod.epsilon)
    for x, y in close_pairs(e, pts, mod.delta):
        if (x, y) in seen:
            continue
        a, b = x, y
        for m in range(max(m_max, 1) * 64):
            seen.add((a, b))
            seen.add((b, a))
            k = _exp(e, a.path, b.path)
            if k is not None and k < cut:
                return (x, y, m)
            a, b = nxt.get(a) or apply_map(e, a), nxt.get(b) or apply_map(e, b)
            if (a, b) == (x, y):
                break
    return None


def _ball(e, path: tuple, s: Fraction, r: Fraction) -> tuple:
    """Key of the open ball of radius ``r`` containing ``path``, for a
    component drawn at scale ``s``."""
    if s < r:
        return ()
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return (t,)
    if isinstance(e, Sum):
        return (t,) + _ball(e.left if t == "L" else e.right, rest, s, r)
    if isinstance(e, CycleOf):
        return (t,) + _ball(e.base, rest, s, r)
    if isinstance(e, (Shift2, IShift)):
        return (None,)  # one coarse group; pairs are filtered exactly below
    if t == "*" or s / 2**t < r:
        return ("*",)
    return (t,) + _ball(e.piece(t), rest, s / 2 ** (t + 1), r)


def close_pairs(e: CascadeExpr, pts, r: Fraction) -> list[tuple[Point, Point]]:
    """All pairs of distinct points at distance below ``r``, found ball by
    ball instead of over all pairs."""
    groups: dict = {}
    for x in pts:
        groups.setdefault(_ball(e, x.path, Fraction(1), r), []).append(x)
    cut, out = _cut(r), []
    for g in groups.values():
        out += [(x, y) for x, y in combinations(g, 2) if _exp(e, x.path, y.path) >= cut]
    return out


def _iterates(n_max: int):
    for n in range(1, n_max + 1):
        yield n
        yield -n


def equicontinuity_failure_witness(
    e: CascadeExpr,
    epsilon: Fraction,
    depth: int = 8,
    iter_bound: int = 64,
    within: tuple = (),
) -> Optional[tuple[Point, Point, int]]:
    """Search for ``x, y`` with ``d(x, y) < epsilon`` yet
    ``d(f^n x, f^n y) >= epsilon`` for some ``0 < |n| <= iter_bound``.

    Pairs are tried in order of increasing distance, so the returned pair is
    at minimal distance among failing pairs on the grid; ``n`` is the first
    failing iterate in the order ``1, -1, 2, -2, ...``.  Only points whose
    address starts with ``within`` are considered.  ``None`` means no failure
    within bounds, not equicontinuity.
    """
    epsilon = Fraction(epsilon)
    pts = [x for x in enumerate_points(e, depth) if x.path[: len(within)] == within]
    pts.sort(key=point_key)
    pairs = []
    for x, y in combinations(pts, 2):
        d = distance(e, x, y)
        if 0 < d < epsilon:
            pairs.append((d, x, y))
    pairs.sort(key=lambda t: (t[0], point_key(t[1]), point_key(t[2])))
    per = {}
    for x in pts:
        p = period(e, x)
        per[x] = p.k if isinstance(p, Finite) else None
    for d, x, y in pairs:
        bound = iter_bound
        if per[x] is not None and per[y] is not None:
            bound = min(bound, lcm(per[x], per[y]))
        for n in _iterates(bound):
            if distance(e, apply_power(e, x, n), apply_power(e, y, n)) >= epsilon:
                # independent re-check by stepping
                fx, fy = _step_power(e, x, n), _step_power(e, y, n)
                if distance(e, fx, fy) < epsilon or distance(e, x, y) >= epsilon:
                    raise RuntimeError("failure witness did not survive re-evaluation")
                return (x, y, n)
    return None


def _step_power(e, x, n):
    from .presentation import apply_inverse, apply_map

    step = apply_map if n > 0 else apply_inverse
    for _ in range(abs(n)):
        x = step(e, x)
    return x
