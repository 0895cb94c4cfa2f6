"""Exact rotation of the disk ``f(r, theta) = (r, theta + r)`` on radii that
are rational multiples of pi.

Coordinates are stored as the rational coefficient of pi, so every point on a
periodic circle is represented exactly and no floating point is involved.
The demo shows that a single p-iterate can fail to be continuous (so the
system is not WAP) while its Ellis semigroup stays abelian.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import nextprime

from .dynamics import Finite
from .residues import ResidueSystem, UnderdeterminedResidue

_TWO = Fraction(2)


def _coef(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}·pi"


@dataclass(frozen=True)
class DiskPoint:
    """Polar point ``(radius*pi, angle*pi)``, angle kept in ``[0, 2)``."""

    radius: Fraction
    angle: Fraction = Fraction(0)

    def __post_init__(self):
        r, a = Fraction(self.radius), Fraction(self.angle) % _TWO
        if not 0 <= r <= 2:
            raise ValueError("radius must lie in [0, 2*pi]")
        object.__setattr__(self, "radius", r)
        object.__setattr__(self, "angle", a if r != 0 else Fraction(0))

    def __str__(self) -> str:
        return f"({_coef(self.radius)}, {_coef(self.angle)})"


def disk_apply(x: DiskPoint, n: int) -> DiskPoint:
    return DiskPoint(x.radius, x.angle + n * x.radius)


def disk_period(x: DiskPoint) -> Finite:
    """Denominator of ``r / 2pi``; the centre is fixed."""
    return Finite((x.radius / 2).denominator)


def _residue(spec, n: int) -> int:
    if isinstance(spec, ResidueSystem):
        return spec.require(n)
    for m, r in dict(spec).items():
        if m == n:
            return r % n
    for m, r in dict(spec).items():
        if m % n == 0:
            return r % n
    raise UnderdeterminedResidue(n)


def disk_p_iterate(x: DiskPoint, spec) -> DiskPoint:
    """``f^p(x) = f^r(x)`` with ``r`` the residue that ``spec`` fixes modulo the
    period of ``x``.  ``spec`` is a ``ResidueSystem`` or a mapping ``n -> r``
    (a multiple of the period also fixes the residue)."""
    n = disk_period(x).k
    if n == 1:
        return x
    return disk_apply(x, _residue(spec, n))


def odd_primes(k: int) -> list[int]:
    out, p = [], 2
    for _ in range(k):
        p = nextprime(p)
        out.append(p)
    return out


@dataclass(frozen=True)
class NonWapRow:
    n: int
    point: DiskPoint
    period: int
    residue: int
    image: DiskPoint


@dataclass(frozen=True)
class NonWapReport:
    rows: tuple
    limit_point: DiskPoint
    limit_image: DiskPoint
    images_limit: DiskPoint

    @property
    def gap(self) -> Fraction:
        """Angular distance (coefficient of pi) between the limit of the
        images and the image of the limit."""
        d = (self.images_limit.angle - self.limit_image.angle) % _TWO
        return min(d, _TWO - d)

    def format(self) -> str:
        lines = [f"{'n':>3} {'point':<24} {'period':>6} {'residue':>7}  image"]
        for r in self.rows:
            lines.append(f"{r.n:>3} {str(r.point):<24} {r.period:>6} {r.residue:>7}  {r.image}")
        lines.append(f"points converge to {self.limit_point}")
        lines.append(f"images converge to {self.images_limit}")
        lines.append(f"f^p at the limit: {self.limit_image}")
        lines.append(f"angular gap: {_coef(self.gap)}")
        return "\n".join(lines)


def nonwap_witness(k_max: int) -> NonWapReport:
    """Points ``(pi + pi/2n, 0)`` for the first ``k_max`` odd primes ``n``.

    Each has period ``4n`` and a p-iterate with residue ``2n`` there sends it
    to angle ``pi``, whereas the same ``p`` (residue 0 mod 2) fixes the limit
    point ``(pi, 0)``.  So ``f^p`` is discontinuous at ``(pi, 0)``.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    primes = odd_primes(k_max)
    spec = {2: 0}
    rows = []
    for n in primes:
        x = DiskPoint(1 + Fraction(1, 2 * n))
        per = disk_period(x).k
        spec[per] = 2 * n
        img = disk_p_iterate(x, spec)
        assert per == 4 * n and img == DiskPoint(x.radius, 1)
        rows.append(NonWapRow(n, x, per, 2 * n, img))
    limit = DiskPoint(1)
    limit_image = disk_p_iterate(limit, spec)
    # radii 1 + 1/2n -> 1 at fixed angle pi
    report = NonWapReport(tuple(rows), limit, limit_image, DiskPoint(1, 1))
    assert report.gap == 1
    return report


def disk_commute_check(points: Sequence[DiskPoint], e1, e2) -> str:
    """Evaluate ``e1 o e2`` and ``e2 o e1`` at every point; residues add, so
    this always returns ``"Commutes"`` for valid input."""
    for x in points:
        a = disk_p_iterate(disk_p_iterate(x, e2), e1)
        b = disk_p_iterate(disk_p_iterate(x, e1), e2)
        if a != b:
            return f"DoesNotCommute at {x}"
    return "Commutes"
