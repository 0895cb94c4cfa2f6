"""Residue systems: congruence data ``{n: r_n}`` describing a family of
ultrafilters on N, and the test deciding whether any ultrafilter lies in all
the classes ``nN + r_n`` at once.

Text form: comma separated ``n:r`` pairs, optionally followed by one tail
rule ``F:E`` where ``F`` is a piece formula in ``n`` (``2^n``, ``3*n+1``,
``2*3^n``) or ``*`` for every modulus not listed, and ``E`` is an integer or
a linear expression in ``g(n)`` such as ``g(n)-1`` or ``g(n)/2``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Mapping, Optional, Union

from sympy.ntheory.modular import solve_congruence

from .presentation import Const, Formula, Geometric, Linear


class MalformedResidue(ValueError):
    pass


class UnderdeterminedResidue(LookupError):
    """A residue is needed for a modulus the system does not fix."""

    def __init__(self, modulus: int):
        super().__init__(f"residue system does not determine a residue modulo {modulus}")
        self.modulus = modulus


@dataclass(frozen=True)
class TailRule:
    """``r(N) = (q*N + c) mod N`` for every modulus ``N`` in the family.

    ``family`` is ``None`` for the catch-all rule ``*``.  ``q`` is kept in
    ``[0, 1)``.
    """

    family: Optional[Formula] = None
    q: Fraction = Fraction(0)
    c: int = 0

    def __post_init__(self):
        q = Fraction(self.q)
        object.__setattr__(self, "q", q - (q.numerator // q.denominator))

    def applies(self, n: int) -> bool:
        if self.family is None:
            return True
        from .presentation import formula_contains

        return formula_contains(self.family, 0, n)

    def value(self, n: int) -> int:
        qn = self.q * n
        if qn.denominator != 1:
            raise MalformedResidue(f"tail rule {self.rhs_text()} is not an integer at modulus {n}")
        return (int(qn) + self.c) % n

    def moduli(self, count: int) -> list[int]:
        """First ``count`` moduli (> 1) the rule ranges over, for a family."""
        g, out, k = self.family, [], 0
        assert g is not None
        while len(out) < count and k < count + 64:
            v = g(k)
            if v > 1 and v not in out:
                out.append(v)
            k += 1
            if isinstance(g, Const) or (isinstance(g, Linear) and g.a == 0) or (
                isinstance(g, Geometric) and g.r == 1
            ):
                break
        return out

    def negated(self) -> "TailRule":
        return TailRule(self.family, -self.q, -self.c)

    def rhs_text(self) -> str:
        if self.q == 0:
            return f"g(n){self.c:+d}" if self.c < 0 else str(self.c)
        a, b = self.q.numerator, self.q.denominator
        term = f"g(n)/{b}" if a == 1 else f"{a}*g(n)/{b}"
        return term if self.c == 0 else f"{term}{self.c:+d}"

    def text(self) -> str:
        return f"{'*' if self.family is None else self.family.text()}:{self.rhs_text()}"


@dataclass(frozen=True)
class ResidueSystem:
    """Congruence constraints ``n -> r_n`` with ``0 <= r_n < n``."""

    constraints: tuple = ()
    tail: Optional[TailRule] = None

    def __post_init__(self):
        items = (
            sorted(self.constraints.items())
            if isinstance(self.constraints, Mapping)
            else sorted(tuple(p) for p in self.constraints)
        )
        seen = {}
        for n, r in items:
            if not isinstance(n, int) or n < 1:
                raise MalformedResidue(f"modulus must be a positive integer, got {n!r}")
            if not isinstance(r, int) or not 0 <= r < n:
                raise MalformedResidue(f"residue {r!r} is out of range for modulus {n}")
            if n in seen and seen[n] != r:
                raise MalformedResidue(f"modulus {n} given twice")
            seen[n] = r
        object.__setattr__(self, "constraints", tuple(sorted(seen.items())))

    @classmethod
    def of(cls, mapping: Mapping[int, int], tail: Optional[TailRule] = None) -> "ResidueSystem":
        return cls(tuple(mapping.items()), tail)

    @classmethod
    def constant(cls, c: int) -> "ResidueSystem":
        """Every modulus gets ``c mod N``: the residues of the integer ``c``."""
        return cls((), TailRule(None, Fraction(0), c))

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.constraints)

    def residue(self, n: int) -> Optional[int]:
        if n == 1:
            return 0
        for m, r in self.constraints:
            if m == n:
                return r
        if self.tail is not None and self.tail.applies(n):
            return self.tail.value(n)
        return None

    def require(self, n: int) -> int:
        r = self.residue(n)
        if r is None:
            raise UnderdeterminedResidue(n)
        return r

    def negated(self) -> "ResidueSystem":
        return ResidueSystem(
            tuple((n, (-r) % n) for n, r in self.constraints),
            None if self.tail is None else self.tail.negated(),
        )

    def __add__(self, other: "ResidueSystem") -> "ResidueSystem":
        """Componentwise sum where both systems determine a residue."""
        keys = {n for n, _ in self.constraints} | {n for n, _ in other.constraints}
        out = {}
        for n in keys:
            a, b = self.residue(n), other.residue(n)
            if a is not None and b is not None:
                out[n] = (a + b) % n
        tail = None
        s, o = self.tail, other.tail
        if s is not None and o is not None:
            if s.family is None or o.family is None or s.family == o.family:
                fam = s.family if s.family is not None else o.family
                tail = TailRule(fam, s.q + o.q, s.c + o.c)
        return ResidueSystem(tuple(out.items()), tail)

    def shifted(self, m: int) -> "ResidueSystem":
        """Add the integer ``m`` to every residue."""
        return self + ResidueSystem.constant(m)

    def __str__(self) -> str:
        return format_residues(self)


# --------------------------------------------------------------------------
# text form

_RHS = re.compile(r"^(?:(?:(\d+)\*)?g\(n\)(?:/(\d+))?)?([+-]\d+)?$")


def _parse_family(text: str) -> Optional[Formula]:
    if text == "*":
        return None
    m = re.fullmatch(r"(\d+)\*n\+(\d+)", text)
    if m:
        return Linear(int(m[1]), int(m[2]))
    m = re.fullmatch(r"(?:(\d+)\*)?(\d+)\^n", text)
    if m:
        return Geometric(int(m[1] or 1), int(m[2]))
    raise MalformedResidue(f"bad tail family {text!r}")


def _parse_rhs(text: str) -> tuple[Fraction, int]:
    if re.fullmatch(r"-?\d+", text):
        return Fraction(0), int(text)
    m = _RHS.match(text)
    if not m or "g(n)" not in text:
        raise MalformedResidue(f"bad tail residue {text!r}")
    num, den, c = int(m[1] or 1), int(m[2] or 1), int(m[3] or 0)
    if den == 0:
        raise MalformedResidue("zero denominator in tail residue")
    return Fraction(num, den), c


def parse_residues(text: str) -> ResidueSystem:
    """Parse ``"4:3,16:9"`` or ``"2:1,*:g(n)-1"`` style text."""
    text = re.sub(r"\s+", "", text)
    if not text:
        return ResidueSystem()
    pairs, tail = {}, None
    for item in text.split(","):
        if item.count(":") != 1:
            raise MalformedResidue(f"expected n:r, got {item!r}")
        lhs, rhs = item.split(":")
        if re.fullmatch(r"\d+", lhs) and re.fullmatch(r"-?\d+", rhs):
            n, r = int(lhs), int(rhs)
            if n in pairs:
                raise MalformedResidue(f"modulus {n} given twice")
            pairs[n] = r
            continue
        if tail is not None:
            raise MalformedResidue("at most one tail rule is allowed")
        if re.fullmatch(r"\d+", lhs):
            raise MalformedResidue(f"bad residue {rhs!r} for modulus {lhs}")
        q, c = _parse_rhs(rhs)
        tail = TailRule(_parse_family(lhs), q, c)
    return ResidueSystem(tuple(pairs.items()), tail)


def format_residues(rs: ResidueSystem) -> str:
    items = [f"{n}:{r}" for n, r in rs.constraints]
    if rs.tail is not None:
        items.append(rs.tail.text())
    return ",".join(items)


# --------------------------------------------------------------------------
# realizability


@dataclass(frozen=True)
class Realizable:
    """Some ultrafilter lies in every class.  ``witness`` is the least
    natural number in all classes when the system is finite."""

    witness: Optional[int] = None
    modulus: Optional[int] = None
    caveat: Optional[str] = None

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Incompatible:
    pair: tuple

    def __bool__(self):
        return False


RealizabilityResult = Union[Realizable, Incompatible]


def compatible(n: int, r: int, m: int, s: int) -> bool:
    return (r - s) % gcd(n, m) == 0


def _domain(rule: TailRule, explicit: set, period_set, limit: int) -> tuple[list[int], bool]:
    """Moduli the tail rule governs, truncated; second value says whether
    the truncation may have cut off an infinite domain."""
    if rule.family is not None:
        ms = rule.moduli(limit)
        return [n for n in ms if n not in explicit], len(ms) > 1
    if period_set is None:
        return [n for n in range(2, limit + 2) if n not in explicit], True
    ms = [n for n in period_set.members(limit) if n > 1 and n not in explicit]
    return ms, not period_set.is_finite()


def realizable(rs: ResidueSystem, period_set=None, depth: int = 8) -> RealizabilityResult:
    """Decide whether the classes ``nN + r_n`` have the finite intersection
    property, i.e. whether a residue system comes from an ultrafilter.

    Finite systems are decided exactly by pairwise compatibility
    ``r_n = r_m (mod gcd(n, m))``.  A tail rule is checked against every
    explicit constraint exactly (the gcd pattern is periodic along each
    family) and against itself symbolically for geometric chains; other
    infinite cases are verified on ``depth`` tail moduli and say so in
    ``caveat``.  ``period_set`` restricts the catch-all rule ``*`` to the
    periods that actually occur.
    """
    if not isinstance(rs, ResidueSystem):
        rs = ResidueSystem.of(rs)
    cons = list(rs.constraints)
    for (n, r), (m, s) in combinations(cons, 2):
        if not compatible(n, r, m, s):
            return Incompatible((n, m))
    rule = rs.tail
    if rule is None:
        if not cons:
            return Realizable(0, 1)
        sol = solve_congruence(*[(r, n) for n, r in cons])
        return Realizable(int(sol[0]), int(sol[1]))

    explicit = {n for n, _ in cons}
    caveat = None
    den = rule.q.denominator
    for n, r in cons:
        span = 2 * n * den * (len(explicit) + 2) + 64
        if isinstance(rule.family, Geometric):
            # gcd(n, a*r^k) and a*r^k mod den stabilise after log2 steps
            span = 2 * (n * den).bit_length() + 4
        dom, _ = _domain(rule, explicit, period_set, span)
        for big in dom:
            if not compatible(n, r, big, rule.value(big)):
                return Incompatible(tuple(sorted((n, big))))

    g = rule.family
    if rule.q == 0:
        pass  # every tail residue is c mod N: pairwise compatible
    elif isinstance(g, Geometric) and g.r > 1:
        chain = rule.moduli(2)
        for big in chain:
            rule.value(big)
        if (rule.q * (g.r - 1)).denominator != 1:
            return Incompatible((chain[0], chain[1]))
    else:
        dom, infinite = _domain(rule, explicit, period_set, depth)
        for a, b in combinations(dom, 2):
            if not compatible(a, rule.value(a), b, rule.value(b)):
                return Incompatible((a, b))
        if infinite:
            caveat = f"tail verified on {len(dom)} moduli (depth {depth})"
    return Realizable(None, None, caveat)
