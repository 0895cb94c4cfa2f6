"""Finitely presented cascades on countable compact ultrametric spaces.

A cascade is written in a small closed grammar::

    expr    := "cycle(" nat ")" | "tower(" pieces ")" | "sum(" expr "," expr ")"
             | "cycleof(" expr "," nat ")" | "shift2" | "ishift"
    pieces  := (expr ",")* family
    family  := "cycle(" formula ")" | "tower(" pieces ")"
    formula := nat | nat "*n+" nat | nat "^n" | nat "*" nat "^n"

A ``tower`` is a sequence of pieces converging to one fixed point ``*``.  The
pieces listed before the last item are explicit; the last item is a family
producing piece ``n`` for every ``n`` past the explicit ones.  A ``cycle``
family produces ``cycle(g(n))``; a ``tower`` family repeats that tower in
every remaining piece (this is how Cantor-Bendixson rank 2 and higher arise).

Points are addressed by flat tuples of tokens read left to right against the
expression tree; see :class:`Point`.
"""
from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

STAR = "*"
PLUS_INF = "+oo"
MINUS_INF = "-oo"
INF = "oo"
LEFT = "L"
RIGHT = "R"


class ParseError(ValueError):
    """Raised for malformed cascade text."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class CascadeSyntaxError(ParseError):
    pass


class CascadeSemanticError(ParseError):
    pass


class InvalidPoint(ValueError):
    """A point address does not match the expression it is used with."""


# --------------------------------------------------------------------------
# formulas for infinite piece families


@dataclass(frozen=True)
class Const:
    k: int

    def __call__(self, n: int) -> int:
        return self.k

    def text(self) -> str:
        return str(self.k)

    def scaled(self, c: int) -> "Const":
        return Const(c * self.k)


@dataclass(frozen=True)
class Linear:
    """g(n) = a*n + b"""

    a: int
    b: int

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def text(self) -> str:
        return f"{self.a}*n+{self.b}"

    def scaled(self, c: int) -> "Linear":
        return Linear(c * self.a, c * self.b)


@dataclass(frozen=True)
class Geometric:
    """g(n) = a * r**n"""

    a: int
    r: int

    def __call__(self, n: int) -> int:
        return self.a * self.r**n

    def text(self) -> str:
        if self.a == 1:
            return f"{self.r}^n"
        return f"{self.a}*{self.r}^n"

    def scaled(self, c: int) -> "Geometric":
        return Geometric(c * self.a, self.r)


Formula = Union[Const, Linear, Geometric]


def formula_members(g: Formula, start: int, bound: int) -> list[int]:
    """Values ``g(n) <= bound`` for ``n >= start``, sorted and deduplicated."""
    out = set()
    if isinstance(g, Const) or (isinstance(g, Linear) and g.a == 0) or (
        isinstance(g, Geometric) and g.r == 1
    ):
        v = g(start)
        if v <= bound:
            out.add(v)
        return sorted(out)
    n = start
    while True:
        v = g(n)
        if v > bound:
            break
        out.add(v)
        n += 1
    return sorted(out)


def formula_contains(g: Formula, start: int, value: int) -> bool:
    """Is ``value == g(n)`` for some ``n >= start``?"""
    if isinstance(g, Const):
        return value == g.k
    if isinstance(g, Linear):
        if g.a == 0:
            return value == g.b
        q, rem = divmod(value - g.b, g.a)
        return rem == 0 and q >= start
    if g.r == 1:
        return value == g.a
    if value % g.a:
        return False
    v, e = value // g.a, 0
    while v % g.r == 0 and v > 1:
        v //= g.r
        e += 1
    return v == 1 and e >= start


# --------------------------------------------------------------------------
# expression tree


@dataclass(frozen=True)
class Cycle:
    k: int


@dataclass(frozen=True)
class CycleFamily:
    formula: Formula


@dataclass(frozen=True)
class TowerFamily:
    tower: "Tower"


Family = Union[CycleFamily, TowerFamily]


@dataclass(frozen=True)
class Tower:
    head: tuple
    tail: Family

    def piece(self, n: int) -> "CascadeExpr":
        if n < 0:
            raise IndexError(n)
        if n < len(self.head):
            return self.head[n]
        if isinstance(self.tail, CycleFamily):
            return Cycle(self.tail.formula(n))
        return self.tail.tower

    def tail_piece(self) -> "CascadeExpr":
        """A representative tail piece (the first one)."""
        return self.piece(len(self.head))


@dataclass(frozen=True)
class Sum:
    left: "CascadeExpr"
    right: "CascadeExpr"


@dataclass(frozen=True)
class CycleOf:
    base: "CascadeExpr"
    m: int


@dataclass(frozen=True)
class Shift2:
    """Two convergent sequences: Z with f(n) = n+1 and fixed ends +-oo."""


@dataclass(frozen=True)
class IShift:
    """One convergent sequence x_0, x_1, ... -> oo, odd indices run down to x_0
    and even indices run up to oo."""


CascadeExpr = Union[Cycle, Tower, Sum, CycleOf, Shift2, IShift]


def TowerLimit(formula: Formula, *head: CascadeExpr) -> Tower:
    """Convenience constructor for a tower of cycles with an optional head."""
    return Tower(tuple(head), CycleFamily(formula))


@dataclass(frozen=True)
class Point:
    """Address of a point: a flat tuple of tokens.

    Tokens are read against the expression: ``L``/``R`` pick a ``sum``
    component, an integer picks a ``cycleof`` copy or a ``tower`` piece,
    ``*`` is a tower's limit point, and the last token is the position in a
    ``cycle``, an integer or ``+oo``/``-oo`` in ``shift2``, or a natural index
    or ``oo`` in ``ishift``.
    """

    path: tuple

    def __str__(self) -> str:
        return ".".join(str(t) for t in self.path)

    def __repr__(self) -> str:
        return f"Point({self})"

    @property
    def leaf(self):
        return self.path[-1]


def point_key(x: Point) -> tuple:
    """Deterministic sort key for points (tokens mix ints and strings)."""
    order = {MINUS_INF: (0, 0), PLUS_INF: (2, 0), INF: (2, 0), STAR: (3, 0), LEFT: (-2, 0), RIGHT: (-1, 0)}
    return tuple(order.get(t, (1, t)) if not _is_int(t) else (1, t) for t in x.path)


_POINT_TOKEN = re.compile(r"^(-?\d+|\+oo|-oo|oo|\*|L|R)$")


def parse_point(text: str) -> Point:
    tokens = text.strip().split(".")
    out = []
    for tok in tokens:
        if not _POINT_TOKEN.match(tok):
            raise InvalidPoint(f"bad point token {tok!r} in {text!r}")
        out.append(int(tok) if tok.lstrip("-").isdigit() else tok)
    return Point(tuple(out))


# --------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|([(),*+^]))")


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        ws_end = pos
        while ws_end < len(text) and text[ws_end].isspace():
            if text[ws_end] == "\n":
                line += 1
                line_start = ws_end + 1
            ws_end += 1
        if ws_end == len(text):
            break
        if m is None or m.end() == pos:
            raise CascadeSyntaxError(
                f"unexpected character {text[ws_end]!r}", line, ws_end - line_start + 1
            )
        col = ws_end - line_start + 1
        num, ident, punct = m.groups()
        if num is not None:
            tokens.append(("nat", num, line, col))
        elif ident is not None:
            tokens.append(("ident", ident, line, col))
        else:
            tokens.append(("punct", punct, line, col))
        pos = m.end()
    tokens.append(("eof", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise CascadeSyntaxError(msg, tok[2], tok[3])

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value or tok[0] == "nat":
            self.fail(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def nat(self) -> tuple[int, tuple]:
        tok = self.next()
        if tok[0] != "nat":
            self.fail(f"expected a natural number, found {tok[1] or 'end of input'!r}", tok)
        return int(tok[1]), tok

    def positive(self) -> int:
        k, tok = self.nat()
        if k < 1:
            raise CascadeSemanticError(f"expected a positive integer, got {k}", tok[2], tok[3])
        return k

    def expr(self) -> CascadeExpr:
        tok = self.next()
        word = tok[1]
        if tok[0] != "ident":
            self.fail(f"expected an expression, found {word or 'end of input'!r}", tok)
        if word == "shift2":
            return Shift2()
        if word == "ishift":
            return IShift()
        if word == "cycle":
            self.expect("(")
            k = self.positive()
            self.expect(")")
            return Cycle(k)
        if word == "sum":
            self.expect("(")
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return Sum(left, right)
        if word == "cycleof":
            self.expect("(")
            base = self.expr()
            self.expect(",")
            m = self.positive()
            self.expect(")")
            return CycleOf(base, m)
        if word == "tower":
            return self.tower_body(tok)
        self.fail(f"unknown constructor {word!r}", tok)

    def tower_body(self, tok) -> Tower:
        self.expect("(")
        items = []
        while True:
            start = self.i
            if self.peek()[1] == "cycle" and self.peek()[0] == "ident":
                items.append(("cycle", self.cycle_item(), start))
            else:
                items.append(("expr", self.expr(), start))
            sep = self.next()
            if sep[1] == ")":
                break
            if sep[1] != ",":
                self.fail(f"expected ',' or ')', found {sep[1] or 'end of input'!r}", sep)
        kind, last, start = items[-1]
        head = [self._as_expr(k, item, s) for k, item, s in items[:-1]]
        if kind == "cycle":
            family: Family = last
        elif isinstance(last, Tower):
            family = TowerFamily(last)
        else:
            t = self.tokens[start]
            raise CascadeSemanticError(
                "the last tower item must be a cycle(...) or tower(...) family", t[2], t[3]
            )
        _check_family(family, len(head), self.tokens[start])
        return Tower(tuple(head), family)

    def _as_expr(self, kind, item, start):
        if kind != "cycle":
            return item
        if not isinstance(item.formula, Const):
            t = self.tokens[start]
            raise CascadeSemanticError(
                "a cycle with a formula in n may only appear as the last tower item", t[2], t[3]
            )
        if item.formula.k < 1:
            t = self.tokens[start]
            raise CascadeSemanticError("cycle length must be positive", t[2], t[3])
        return Cycle(item.formula.k)

    def cycle_item(self) -> CycleFamily:
        self.expect("cycle")
        self.expect("(")
        g = self.formula()
        self.expect(")")
        return CycleFamily(g)

    def formula(self) -> Formula:
        a, _ = self.nat()
        tok = self.peek()
        if tok[1] == "^":
            self.next()
            self.expect("n")
            return Geometric(1, a)
        if tok[1] != "*":
            return Const(a)
        self.next()
        if self.peek()[1] == "n":
            self.next()
            self.expect("+")
            b, _ = self.nat()
            return Linear(a, b)
        r, _ = self.nat()
        self.expect("^")
        self.expect("n")
        return Geometric(a, r)


def _check_family(family: Family, start: int, tok) -> None:
    if isinstance(family, TowerFamily):
        return
    g = family.formula
    bad = False
    if isinstance(g, Const):
        bad = g.k < 1
    elif isinstance(g, Linear):
        bad = g(start) < 1
    else:
        bad = g.a < 1 or g.r < 1
    if bad:
        raise CascadeSemanticError(
            f"piece family cycle({g.text()}) has a non-positive length", tok[2], tok[3]
        )


def parse_cascade(text: str) -> CascadeExpr:
    """Parse DSL text into an expression tree.

    >>> parse_cascade("sum(tower(cycle(2^n)), cycle(5))")
    Sum(left=Tower(head=(), tail=CycleFamily(formula=Geometric(a=1, r=2))), right=Cycle(k=5))
    """
    p = _Parser(text)
    e = p.expr()
    tok = p.peek()
    if tok[0] != "eof":
        p.fail(f"unexpected trailing input {tok[1]!r}", tok)
    return e


def format_cascade(e: CascadeExpr) -> str:
    """Canonical text form; ``parse_cascade(format_cascade(e)) == e``."""
    if isinstance(e, Cycle):
        return f"cycle({e.k})"
    if isinstance(e, Sum):
        return f"sum({format_cascade(e.left)},{format_cascade(e.right)})"
    if isinstance(e, CycleOf):
        return f"cycleof({format_cascade(e.base)},{e.m})"
    if isinstance(e, Shift2):
        return "shift2"
    if isinstance(e, IShift):
        return "ishift"
    if isinstance(e, Tower):
        items = [format_cascade(h) for h in e.head]
        if isinstance(e.tail, CycleFamily):
            items.append(f"cycle({e.tail.formula.text()})")
        else:
            items.append(format_cascade(e.tail.tower))
        return "tower(" + ",".join(items) + ")"
    raise TypeError(f"not a cascade expression: {e!r}")


# --------------------------------------------------------------------------
# points


def _walk_error(e, path) -> InvalidPoint:
    return InvalidPoint(f"address {'.'.join(map(str, path)) or '<empty>'} is not valid in {format_cascade(e)}")


def check_point(e: CascadeExpr, x: Point) -> None:
    """Raise :class:`InvalidPoint` unless ``x`` addresses a point of ``e``."""
    if not isinstance(x, Point) or not _valid(e, x.path):
        raise InvalidPoint(f"{x} is not a point of {format_cascade(e)}")


def _is_int(t) -> bool:
    return isinstance(t, int) and not isinstance(t, bool)


@lru_cache(maxsize=1 << 16)
def _valid(e, path) -> bool:
    if not path:
        return False
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return not rest and _is_int(t) and 0 <= t < e.k
    if isinstance(e, Shift2):
        return not rest and (_is_int(t) or t in (PLUS_INF, MINUS_INF))
    if isinstance(e, IShift):
        return not rest and ((_is_int(t) and t >= 0) or t == INF)
    if isinstance(e, Sum):
        if t == LEFT:
            return _valid(e.left, rest)
        return t == RIGHT and _valid(e.right, rest)
    if isinstance(e, CycleOf):
        return _is_int(t) and 0 <= t < e.m and _valid(e.base, rest)
    if isinstance(e, Tower):
        if t == STAR:
            return not rest
        return _is_int(t) and t >= 0 and _valid(e.piece(t), rest)
    return False


def enumerate_points(e: CascadeExpr, depth: int) -> list[Point]:
    """All points whose infinite-family indices are at most ``depth``.

    Limit points are always included.  Tower pieces listed explicitly in the
    head are always included even when their index exceeds ``depth``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return [Point(p) for p in _paths(e, depth)]


def _paths(e, depth) -> Iterator[tuple]:
    if isinstance(e, Cycle):
        for i in range(e.k):
            yield (i,)
    elif isinstance(e, Shift2):
        yield (MINUS_INF,)
        for z in range(-depth, depth + 1):
            yield (z,)
        yield (PLUS_INF,)
    elif isinstance(e, IShift):
        for n in range(depth + 1):
            yield (n,)
        yield (INF,)
    elif isinstance(e, Sum):
        for p in _paths(e.left, depth):
            yield (LEFT,) + p
        for p in _paths(e.right, depth):
            yield (RIGHT,) + p
    elif isinstance(e, CycleOf):
        base = list(_paths(e.base, depth))
        for c in range(e.m):
            for p in base:
                yield (c,) + p
    elif isinstance(e, Tower):
        for n in range(max(depth, len(e.head) - 1) + 1):
            for p in _paths(e.piece(n), depth):
                yield (n,) + p
        yield (STAR,)
    else:
        raise TypeError(e)


def count_points(e: CascadeExpr, depth: int) -> int:
    """``len(enumerate_points(e, depth))`` without building the list."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if isinstance(e, Cycle):
        return e.k
    if isinstance(e, Shift2):
        return 2 * depth + 3
    if isinstance(e, IShift):
        return depth + 2
    if isinstance(e, Sum):
        return count_points(e.left, depth) + count_points(e.right, depth)
    if isinstance(e, CycleOf):
        return e.m * count_points(e.base, depth)
    if isinstance(e, Tower):
        return 1 + sum(count_points(e.piece(n), depth) for n in range(max(depth, len(e.head) - 1) + 1))
    raise TypeError(e)


# --------------------------------------------------------------------------
# the homeomorphism


def _ishift_pos(n: int) -> int:
    # position along the bi-infinite orbit ... x5, x3, x1, x0, x2, x4 ...
    return n // 2 if n % 2 == 0 else -(n + 1) // 2


def _ishift_index(pos: int) -> int:
    return 2 * pos if pos >= 0 else -2 * pos - 1


def apply_map(e: CascadeExpr, x: Point) -> Point:
    """One step of the homeomorphism, generator by generator."""
    check_point(e, x)
    return Point(_step(e, x.path, +1))


def apply_inverse(e: CascadeExpr, x: Point) -> Point:
    check_point(e, x)
    return Point(_step(e, x.path, -1))


def _step(e, path, s) -> tuple:
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return ((t + s) % e.k,)
    if isinstance(e, Shift2):
        return (t,) if t in (PLUS_INF, MINUS_INF) else (t + s,)
    if isinstance(e, IShift):
        if t == INF:
            return (t,)
        if s > 0:
            if t == 1:
                return (0,)
            return (t - 2,) if t % 2 else (t + 2,)
        if t == 0:
            return (1,)
        return (t + 2,) if t % 2 else (t - 2,)
    if isinstance(e, Sum):
        return (t,) + _step(e.left if t == LEFT else e.right, rest, s)
    if isinstance(e, CycleOf):
        c = t + s
        if 0 <= c < e.m:
            return (c,) + rest
        return (c % e.m,) + _step(e.base, rest, s)
    if isinstance(e, Tower):
        if t == STAR:
            return path
        return (t,) + _step(e.piece(t), rest, s)
    raise TypeError(e)


def apply_power(e: CascadeExpr, x: Point, n: int) -> Point:
    """``f**n (x)`` for any integer ``n``, computed arithmetically."""
    check_point(e, x)
    return Point(_power(e, x.path, n))


def _power(e, path, n) -> tuple:
    if n == 0:
        return path
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return ((t + n) % e.k,)
    if isinstance(e, Shift2):
        return (t,) if t in (PLUS_INF, MINUS_INF) else (t + n,)
    if isinstance(e, IShift):
        return (t,) if t == INF else (_ishift_index(_ishift_pos(t) + n),)
    if isinstance(e, Sum):
        return (t,) + _power(e.left if t == LEFT else e.right, rest, n)
    if isinstance(e, CycleOf):
        q, c = divmod(t + n, e.m)
        return (c,) + _power(e.base, rest, q)
    if isinstance(e, Tower):
        if t == STAR:
            return path
        return (t,) + _power(e.piece(t), rest, n)
    raise TypeError(e)


# --------------------------------------------------------------------------
# metric

_ONE = Fraction(1)


def distance(e: CascadeExpr, x: Point, y: Point) -> Fraction:
    """The dyadic ultrametric.

    Distinct sum components and distinct cycleof copies are at distance 1.
    Inside a tower, piece ``n`` lies at distance ``2**-n`` from the limit
    point and is scaled into diameter ``2**-(n+1)``.
    """
    check_point(e, x)
    check_point(e, y)
    return _dist(e, x.path, y.path)


def _shift2_exp(a, b) -> Optional[int]:
    if a == b:
        return None
    inf = (PLUS_INF, MINUS_INF)
    if a in inf and b in inf:
        return 0
    if b in inf:
        a, b = b, a
    if a == PLUS_INF:
        return b if b >= 1 else 0
    if a == MINUS_INF:
        return -b if b <= -1 else 0
    if a == 0 or b == 0 or (a > 0) != (b > 0):
        return 0
    return min(abs(a), abs(b))


def _ishift_exp(a, b) -> Optional[int]:
    if a == b:
        return None
    if a == INF:
        return b
    if b == INF:
        return a
    return min(a, b)


def _exp(e, p, q) -> Optional[int]:
    """``k`` with ``d(p, q) = 2**-k``, or ``None`` when ``p == q``."""
    if p == q:
        return None
    a, b = p[0], q[0]
    if isinstance(e, Cycle):
        return 0
    if isinstance(e, Shift2):
        return _shift2_exp(a, b)
    if isinstance(e, IShift):
        return _ishift_exp(a, b)
    if isinstance(e, Sum):
        if a != b:
            return 0
        return _exp(e.left if a == LEFT else e.right, p[1:], q[1:])
    if isinstance(e, CycleOf):
        if a != b:
            return 0
        return _exp(e.base, p[1:], q[1:])
    if isinstance(e, Tower):
        if a == STAR:
            return b
        if b == STAR:
            return a
        if a != b:
            return min(a, b)
        return _exp(e.piece(a), p[1:], q[1:]) + a + 1
    raise TypeError(e)


def _dist(e, p, q) -> Fraction:
    k = _exp(e, p, q)
    return Fraction(0) if k is None else Fraction(1, 2**k)


# --------------------------------------------------------------------------
# Cantor-Bendixson rank


def max_point_rank(e: CascadeExpr) -> int:
    """Largest Cantor-Bendixson rank of a point of ``e``."""
    if isinstance(e, Cycle):
        return 0
    if isinstance(e, (Shift2, IShift)):
        return 1
    if isinstance(e, Sum):
        return max(max_point_rank(e.left), max_point_rank(e.right))
    if isinstance(e, CycleOf):
        return max_point_rank(e.base)
    if isinstance(e, Tower):
        ranks = [max_point_rank(h) for h in e.head]
        return max(ranks + [_star_rank(e)])
    raise TypeError(e)


def _star_rank(t: Tower) -> int:
    # the limit point is an accumulation point of exactly those ranks that
    # occur in infinitely many pieces, i.e. in the tail
    return 1 + max_point_rank(t.tail_piece())


def cb_rank_point(e: CascadeExpr, x: Point) -> int:
    check_point(e, x)
    return _rank(e, x.path)


def _rank(e, path) -> int:
    t, rest = path[0], path[1:]
    if isinstance(e, Cycle):
        return 0
    if isinstance(e, Shift2):
        return 1 if t in (PLUS_INF, MINUS_INF) else 0
    if isinstance(e, IShift):
        return 1 if t == INF else 0
    if isinstance(e, Sum):
        return _rank(e.left if t == LEFT else e.right, rest)
    if isinstance(e, CycleOf):
        return _rank(e.base, rest)
    if t == STAR:
        return _star_rank(e)
    return _rank(e.piece(t), rest)


def cb_rank_space(e: CascadeExpr) -> int:
    """Cantor-Bendixson rank of the space: the first ``a`` with an empty
    ``a``-th derived set."""
    return max_point_rank(e) + 1


def tower_nesting(e: CascadeExpr) -> int:
    """Depth of limit-point nesting along the deepest infinite branch."""
    if isinstance(e, Cycle):
        return 0
    if isinstance(e, (Shift2, IShift)):
        return 1
    if isinstance(e, Sum):
        return max(tower_nesting(e.left), tower_nesting(e.right))
    if isinstance(e, CycleOf):
        return tower_nesting(e.base)
    return max([tower_nesting(h) for h in e.head] + [1 + tower_nesting(e.tail_piece())])


def size(e: CascadeExpr) -> int:
    """Number of grammar nodes, counting a family as one node."""
    if isinstance(e, (Cycle, Shift2, IShift)):
        return 1
    if isinstance(e, Sum):
        return 1 + size(e.left) + size(e.right)
    if isinstance(e, CycleOf):
        return 1 + size(e.base)
    tail = 1 if isinstance(e.tail, CycleFamily) else size(e.tail.tower)
    return 1 + sum(size(h) for h in e.head) + tail
