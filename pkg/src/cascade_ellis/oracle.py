"""Brute-force ground truth for the symbolic Ellis computations.

Nothing here reuses the symbolic machinery: iterates are produced by stepping
``f`` or ``f^-1`` one point at a time, limits are read off sampled orbits,
and congruences are solved by hand rather than through a library.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence, Union

from .presentation import (
    INF,
    MINUS_INF,
    PLUS_INF,
    CascadeExpr,
    Point,
    apply_inverse,
    apply_map,
    distance,
    enumerate_points,
    point_key,
)


class IncompatibleSpec(ValueError):
    """The congruences admit no common ultrafilter."""


@dataclass(frozen=True)
class Principal:
    m: int


@dataclass(frozen=True)
class Congruences:
    """Any non-principal ultrafilter containing every ``nN + r``."""

    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(n), int(r) % int(n)) for n, r in self.pairs))

    def negated(self) -> "Congruences":
        return Congruences(tuple((n, -r) for n, r in self.pairs))


ClassSpec = Union[Principal, Congruences]


# --------------------------------------------------------------------------
# CRT


@dataclass(frozen=True)
class Solution:
    n0: int
    modulus: int


@dataclass(frozen=True)
class Incompatible:
    pair: tuple


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def crt_solve(congruences: Sequence[tuple[int, int]]) -> Union[Solution, Incompatible]:
    """Least ``n0 >= 0`` with ``n0 = r (mod n)`` for every pair, modulo the lcm.

    Pairs are merged one at a time; when a merge fails the first pair (in
    input order) that disagrees modulo its gcd is reported.
    """
    pairs = [(int(n), int(r)) for n, r in congruences]
    for n, r in pairs:
        if n < 1 or not 0 <= r < n:
            raise ValueError(f"need 0 <= r < n, got ({n}, {r})")
    a, m = 0, 1
    for n, r in pairs:
        g, u, _ = _egcd(m, n)
        if (r - a) % g:
            for (n1, r1), (n2, r2) in combinations(pairs, 2):
                if (r1 - r2) % gcd(n1, n2):
                    return Incompatible((n1, n2))
            raise AssertionError("merge failed but every pair agrees")
        step = (r - a) // g * u % (n // g)
        a, m = a + m * step, m * n // g
        a %= m
    for n, r in pairs:
        assert a % n == r
    return Solution(a, m)


# --------------------------------------------------------------------------
# p-iterates


@dataclass(frozen=True)
class Stabilized:
    point: Point


@dataclass(frozen=True)
class NotStabilized:
    samples: tuple


CONFIRMATIONS = 3
_ENDS = (PLUS_INF, MINUS_INF, INF)


def _class_of(spec: Congruences) -> tuple[int, int]:
    sol = crt_solve(spec.pairs)
    if isinstance(sol, Incompatible):
        raise IncompatibleSpec(f"congruences disagree at {sol.pair}")
    return sol.n0, sol.modulus


def _orbit_steps(expr, x, m_max, backward):
    step = apply_inverse if backward else apply_map
    out = [x]
    for _ in range(m_max):
        out.append(step(expr, out[-1]))
    return out


def _ends(expr: CascadeExpr) -> list[Point]:
    return [p for p in enumerate_points(expr, 1) if p.path and p.path[-1] in _ENDS]


def p_iterate_limit(
    expr: CascadeExpr, x: Point, spec: ClassSpec, m_max: int = 64, backward: bool = False
) -> Union[Stabilized, NotStabilized]:
    """Read ``f^p(x)`` (or ``(f^-1)^p(x)``) off the sampled iterates
    ``f^m(x)`` with ``m <= m_max`` in the congruence class given by ``spec``.

    Stabilized when the last ``CONFIRMATIONS`` samples agree, or when the
    samples close in monotonically on one of the ends ``+oo``, ``-oo``,
    ``oo`` of the space.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    if isinstance(spec, Principal):
        return Stabilized(_stepped(expr, x, -spec.m if backward else spec.m))
    orbit = _orbit_steps(expr, x, m_max, backward)
    return _read_limit(expr, orbit, *_class_of(spec), _ends(expr))


def _read_limit(expr, orbit: list, n0: int, mod: int, ends: list) -> Union[Stabilized, NotStabilized]:
    samples = tuple(orbit[m] for m in range(n0 if n0 > 0 else mod, len(orbit), mod))
    if len(samples) >= CONFIRMATIONS and len(set(samples[-CONFIRMATIONS:])) == 1:
        return Stabilized(samples[-1])
    tail = samples[len(samples) // 2 :]
    if len(tail) >= CONFIRMATIONS:
        for end in ends:
            ds = [distance(expr, y, end) for y in tail]
            if all(a > b for a, b in zip(ds, ds[1:])) and ds[-1] <= Fraction(1, 8):
                return Stabilized(end)
    return NotStabilized(samples)


# --------------------------------------------------------------------------
# function tables


@dataclass(frozen=True)
class FunctionTable:
    domain: tuple
    images: tuple

    def __call__(self, x: Point) -> Point:
        return self.images[self.domain.index(x)]

    def compose(self, other: "FunctionTable") -> "FunctionTable":
        """``self o other``; every image of ``other`` must lie in the domain."""
        if self.domain != other.domain:
            raise ValueError("tables live on different domains")
        return FunctionTable(self.domain, tuple(self(y) for y in other.images))

    def is_identity(self) -> bool:
        return self.images == self.domain

    def format(self) -> str:
        return ", ".join(f"{x}->{y}" for x, y in zip(self.domain, self.images))


def table_of(fn, domain: Sequence[Point]) -> FunctionTable:
    dom = tuple(domain)
    return FunctionTable(dom, tuple(fn(x) for x in dom))


@dataclass(frozen=True)
class Closure:
    tables: tuple
    exact: bool
    complete: bool
    labels: tuple

    def __len__(self):
        return len(self.tables)

    def closed_under_composition(self) -> bool:
        s = set(self.tables)
        return all(a.compose(b) in s for a in self.tables for b in self.tables)

    def has_inverses(self) -> bool:
        s = set(self.tables)
        return all(
            any(a.compose(b).is_identity() and b.compose(a).is_identity() for b in s) for a in self.tables
        )


def _period_brute(expr, x, bound: int = 4096) -> Optional[int]:
    y = x
    for k in range(1, bound + 1):
        y = apply_map(expr, y)
        if y == x:
            return k
    return None


def pointwise_closure(expr: CascadeExpr, points: Sequence[Point], power_bound: int) -> Closure:
    """Distinct restrictions of ``f^-b .. f^b`` to ``points`` together with the
    stabilized limit tables along every class ``L*N + r``, where ``L`` is the
    lcm of the periods found among the points.

    ``exact`` says the point set is invariant under ``f`` and ``f^-1`` (then
    the tables are the full restricted closure); ``complete`` says every
    limit table stabilized.
    """
    dom = tuple(sorted(set(points), key=point_key))
    if not dom:
        raise ValueError("need at least one point")
    s = set(dom)
    exact = all(apply_map(expr, x) in s and apply_inverse(expr, x) in s for x in dom)
    L = 1
    for x in dom:
        p = _period_brute(expr, x)
        if p is not None:
            L = L * p // gcd(L, p)
    found: dict[FunctionTable, str] = {}
    m_max = max(4 * L, 64, power_bound)
    fwd = {x: _orbit_steps(expr, x, m_max, False) for x in dom}
    back = {x: _orbit_steps(expr, x, m_max, True) for x in dom}
    for m in sorted(range(-power_bound, power_bound + 1), key=lambda k: (abs(k), k < 0)):
        t = FunctionTable(dom, tuple((fwd if m >= 0 else back)[x][abs(m)] for x in dom))
        found.setdefault(t, "id" if m == 0 else f"f^{m}")
    complete = True
    ends = _ends(expr)
    for backward in (False, True):
        orbits = back if backward else fwd
        for r in range(L):
            imgs = []
            for x in dom:
                res = _read_limit(expr, orbits[x], r, L, ends)
                if isinstance(res, NotStabilized):
                    complete = False
                    break
                imgs.append(res.point)
            else:
                label = f"lim{'-' if backward else '+'}[{L}:{r}]"
                found.setdefault(FunctionTable(dom, tuple(imgs)), label)
    return Closure(tuple(found), exact, complete, tuple(found.values()))


def _stepped(expr, x, m):
    step = apply_map if m > 0 else apply_inverse
    for _ in range(abs(m)):
        x = step(expr, x)
    return x
