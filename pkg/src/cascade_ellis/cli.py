"""Command-line front end.

Usage: ``cascade-ellis SUBCOMMAND [EXPR] [ARGS...] [flags]``.  The cascade
expression is the first positional argument unless ``--file`` supplies it.
Exit status: 0 on success, 1 on domain errors, 2 on usage and syntax errors.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import diskdemo, dynamics, ellis, equicont, oracle
from .presentation import (
    InvalidPoint,
    ParseError,
    cb_rank_space,
    check_point,
    enumerate_points,
    format_cascade,
    parse_cascade,
    parse_point,
    point_key,
)
from .residues import (
    Incompatible,
    MalformedResidue,
    UnderdeterminedResidue,
    parse_residues,
    realizable,
)

GRAMMAR = """grammar:
  expr    := cycle(N) | tower(pieces) | sum(expr,expr) | cycleof(expr,N) | shift2 | ishift
  pieces  := (expr,)* family
  family  := cycle(formula) | tower(pieces)
  formula := N | A*n+B | R^n | A*R^n
points:   dotted addresses such as 3, L.2, 4.1, 0.*, -7, +oo, oo
elements: id | f | f^M | lim+[n:r,...] | lim-[n:r,...]
residues: n:r,... optionally followed by one tail rule such as 2^n:g(n)-1 or *:0"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, eps: bool = False) -> None:
    p.add_argument("args", nargs="*", help="expression (unless --file) and operands")
    p.add_argument("--file", help="read the expression from PATH")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--iter-bound", type=int, default=64)
    if eps:
        p.add_argument("--eps", required=True, help="dyadic epsilon, e.g. 1/2^3")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cascade-ellis", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    for name in ("classify", "periods", "compose", "inverse", "evaluate", "en-eq-ez"):
        _common(sub.add_parser(name))
    p = sub.add_parser("ellis")
    _common(p)
    p.add_argument("--bound", type=int, default=2, help="powers f^-b..f^b in the table")
    for name in ("equicont", "witness"):
        _common(sub.add_parser(name), eps=True)
    p = sub.add_parser("realizable")
    p.add_argument("residues")
    p.add_argument("--expr", help="restrict '*' rules to the periods of this expression")
    p.add_argument("--depth", type=int, default=8)
    p = sub.add_parser("oracle")
    p.add_argument("mode", choices=["piter", "closure", "crt"])
    _common(p)
    p.add_argument("--backward", action="store_true")
    p.add_argument("--power-bound", type=int, default=12)
    p = sub.add_parser("disk")
    p.add_argument("mode", choices=["nonwap"])
    p.add_argument("--k", type=int, default=3)
    return ap


def _expr_and_operands(ns, n_ops: int):
    args = list(ns.args)
    if ns.file:
        try:
            with open(ns.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {ns.file}: {exc.strerror}")
    else:
        if not args:
            raise UsageError("missing expression")
        text = args.pop(0)
    if len(args) != n_ops:
        raise UsageError(f"expected {n_ops} operand(s) after the expression, got {len(args)}")
    return parse_cascade(text), args


def _point(expr, text):
    x = parse_point(text)
    check_point(expr, x)
    return x


def _eps(text: str) -> Fraction:
    try:
        return equicont.parse_dyadic(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def _congruences(text: str) -> list[tuple[int, int]]:
    rs = parse_residues(text)
    if rs.tail is not None:
        raise MalformedResidue("congruence lists take explicit n:r pairs only")
    return list(rs.constraints)


def _periods(expr, depth: int) -> str:
    ms = dynamics.minimal_sets(expr, depth)
    lines = [
        f"expression: {format_cascade(expr)}",
        f"period_set: {dynamics.period_set(expr)}",
        f"periods_at_depth_{depth}: {', '.join(map(str, dynamics.truncated_periods(expr, depth)))}",
        f"all_periodic: {str(dynamics.is_all_periodic(expr)).lower()}",
        f"cb_rank: {cb_rank_space(expr)}",
        f"max_rank_set: {', '.join(map(str, dynamics.max_rank_set(expr)))}",
        f"minimal_sets_at_depth_{depth}: {len(ms.orbits)}",
    ]
    lines += ["  " + " -> ".join(map(str, orb)) for orb in ms.orbits]
    lines += [f"  beyond depth: {f}" for f in ms.families]
    return "\n".join(lines)


def _run(ns) -> str:
    cmd = ns.command
    if cmd == "realizable":
        rs = parse_residues(ns.residues)
        ps = dynamics.period_set(parse_cascade(ns.expr)) if ns.expr else None
        res = realizable(rs, ps, ns.depth)
        if isinstance(res, Incompatible):
            return f"incompatible at ({res.pair[0]},{res.pair[1]})"
        out = "realizable"
        if res.witness is not None:
            out += f" witness={res.witness} modulus={res.modulus}"
        if res.caveat:
            out += f"\ncaveat: {res.caveat}"
        return out
    if cmd == "disk":
        if ns.k < 1:
            raise UsageError("--k must be at least 1")
        return diskdemo.nonwap_witness(ns.k).format()
    if cmd == "oracle" and ns.mode == "crt":
        if ns.file or len(ns.args) != 1:
            raise UsageError("oracle crt takes one congruence list such as 4:3,16:9")
        res = oracle.crt_solve(_congruences(ns.args[0]))
        if isinstance(res, oracle.Incompatible):
            return f"incompatible at ({res.pair[0]},{res.pair[1]})"
        return f"solution n0={res.n0} modulus={res.modulus}"

    if cmd == "classify":
        expr, _ = _expr_and_operands(ns, 0)
        return dynamics.classify(expr, ns.depth, ns.iter_bound).report()
    if cmd == "periods":
        expr, _ = _expr_and_operands(ns, 0)
        return _periods(expr, ns.depth)
    if cmd == "ellis":
        expr, _ = _expr_and_operands(ns, 0)
        t = ellis.truncated_semigroup(expr, ns.depth, ns.bound)
        return "\n".join(
            [
                f"expression: {format_cascade(expr)}",
                f"depth: {ns.depth}",
                f"elements: {len(t.labels)}",
                t.format(),
                f"commutative: {str(t.commutative).lower()}",
                f"all_continuous: {str(all(t.continuous)).lower()}",
            ]
        )
    if cmd == "compose":
        expr, (g, h) = _expr_and_operands(ns, 2)
        return ellis.format_element(ellis.compose(ellis.parse_element(g), ellis.parse_element(h), expr))
    if cmd == "inverse":
        expr, (g,) = _expr_and_operands(ns, 1)
        return ellis.format_element(ellis.inverse(ellis.parse_element(g), expr))
    if cmd == "evaluate":
        expr, (g, x) = _expr_and_operands(ns, 2)
        return str(ellis.evaluate(ellis.parse_element(g), expr, _point(expr, x)))
    if cmd == "en-eq-ez":
        expr, _ = _expr_and_operands(ns, 0)
        res = ellis.en_equals_ez(expr, min(ns.depth, 6))
        if isinstance(res, ellis.Equal):
            return f"equal: f^-1 = {ellis.format_element(res.witness)}"
        return f"not equal: aperiodic point {res.witness}"
    if cmd == "equicont":
        expr, _ = _expr_and_operands(ns, 0)
        eps = _eps(ns.eps)
        ub = equicont.uniform_period_bound(expr, eps, ns.depth, ns.iter_bound)
        mod = equicont.equicontinuity_modulus(expr, eps, min(ns.depth, 6), ns.iter_bound)
        return "\n".join(
            [
                f"eps: {eps}",
                f"l: {ub.l}",
                f"delta: {mod.delta}",
                f"verified: depth={ns.depth} n<={ns.iter_bound} (l); depth={min(ns.depth, 6)} m<={ns.iter_bound} (delta)",
            ]
        )
    if cmd == "witness":
        expr, _ = _expr_and_operands(ns, 0)
        eps = _eps(ns.eps)
        w = equicont.equicontinuity_failure_witness(expr, eps, ns.depth, ns.iter_bound)
        bounds = f"depth={ns.depth} iter_bound={ns.iter_bound}"
        if w is None:
            return f"none within bounds ({bounds})"
        x, y, n = w
        return f"x={x} y={y} n={n} eps={eps} ({bounds})"
    # oracle piter / closure
    if ns.mode == "piter":
        expr, (x, spec) = _expr_and_operands(ns, 2)
        if spec.startswith("f^") or spec in ("id", "f"):
            m = ellis.parse_element(spec).m
            cls: oracle.ClassSpec = oracle.Principal(m)
        else:
            cls = oracle.Congruences(tuple(_congruences(spec)))
        res = oracle.p_iterate_limit(expr, _point(expr, x), cls, ns.iter_bound, ns.backward)
        if isinstance(res, oracle.Stabilized):
            return f"stabilized: {res.point}"
        return "not stabilized: " + " ".join(map(str, res.samples))
    expr, _ = _expr_and_operands(ns, 0)
    pts = sorted(enumerate_points(expr, ns.depth), key=point_key)
    c = oracle.pointwise_closure(expr, pts, ns.power_bound)
    lines = [f"tables: {len(c)}", f"exact: {str(c.exact).lower()}", f"complete: {str(c.complete).lower()}"]
    lines += [f"{lab}: {t.format()}" for lab, t in zip(c.labels, c.tables)]
    return "\n".join(lines)


_DOMAIN_ERRORS = (
    dynamics.NotAllPeriodic,
    UnderdeterminedResidue,
    ellis.NotInvertible,
    oracle.IncompatibleSpec,
    InvalidPoint,
)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
        if ns.command is None:
            raise UsageError("missing subcommand")
        for flag in ("depth", "iter_bound", "power_bound"):
            if getattr(ns, flag, 1) < 0:
                raise UsageError(f"--{flag.replace('_', '-')} must be non-negative")
        out = _run(ns)
    except UsageError as exc:
        print(f"usage error: {exc}\n{ap.format_usage()}{GRAMMAR}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"syntax error: {exc}\n{GRAMMAR}", file=sys.stderr)
        return 2
    except MalformedResidue as exc:
        print(f"malformed input: {exc}\n{GRAMMAR}", file=sys.stderr)
        return 2
    except _DOMAIN_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, LookupError, ArithmeticError, RecursionError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
