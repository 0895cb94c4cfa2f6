"""Enveloping semigroups of cascades on countable compact ultrametric spaces,
computed symbolically from a small presentation language and checked against
a brute-force oracle."""

from .presentation import Point, enumerate_points, format_cascade, parse_cascade
from .dynamics import classify
from .ellis import LimitElement, PrincipalPower, Side, compose, evaluate, inverse, truncated_semigroup
from .residues import ResidueSystem, parse_residues, realizable

__all__ = [
    "LimitElement",
    "Point",
    "PrincipalPower",
    "ResidueSystem",
    "Side",
    "classify",
    "compose",
    "enumerate_points",
    "evaluate",
    "format_cascade",
    "inverse",
    "parse_cascade",
    "parse_residues",
    "realizable",
    "truncated_semigroup",
]
