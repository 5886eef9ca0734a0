"""Command-line surface: verify, eval, sweep, complete, catalog.

Reports are JSON with a fixed field order and canonical entry ordering
(catalog ids sorted lexicographically, sweep points in grid order), so
two runs at the same version, precision and inputs are byte-identical.
Timings are all zero unless --timings is passed, keeping the default
output deterministic.

Exit codes: 0 all checks pass, 1 a mathematical verification failed,
2 usage, parse or domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .errors import DomainError, ParseError, ThetavalError
from .exact import build_catalog, render_expr, render_theta, verify_identity
from .lostnotebook import complete_evaluation, compute_p, compute_uvw, verify_quartic_relation
from .modular import (
    YiQuotient,
    hyp2f1_half,
    jims_identity,
    verify_degree3,
    verify_degree15,
    yi_h,
    yi_product_theorem,
)
from .precision import (
    Ball,
    PrecCtx,
    agm,
    agreement_digits,
    cos,
    decimal_str,
    gamma_rational,
    rad_exponent,
)
from .precision import _log10_floor, _pi_ball
from .qseries import QPoint, chi, f_neg, phi, psi, theta_f

BITS_PER_DIGIT = 3.33
DEFAULT_BITS = 512

_DEFAULT_GRIDS = {
    "deg3": "0.05,0.1,0.2,0.3,0.4",
    "deg15": "0.15,0.4",
    "jims": "0.3,0.6,0.9",
    "septic": "0.1,0.2,0.3,0.4",
    "yi_product": "2:1:6:2:3,3:1:1:1:1,5:2:2:4:1",
}


# ---------------------------------------------------------------------------
# expression grammar
#
#   expr   := term (('+' | '-') term)*
#   term   := unary (('*' | '/') unary)*
#   unary  := '-' unary | power
#   power  := atom ('^' unary)?          exponent must fold to a rational
#   atom   := NUMBER | 'pi' | NAME '(' expr (',' expr)* ')' | '(' expr ')'
#
# Functions: phi, psi, fneg, chi, f, gamma, cospi, agm, hyp, h, hprime,
# classinv; the special form qpoint(sign, r) denotes sign * e^(-pi sqrt r).

_TOKEN_RE = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

_FUNCTIONS = {
    "phi",
    "psi",
    "fneg",
    "chi",
    "f",
    "gamma",
    "cospi",
    "agm",
    "hyp",
    "h",
    "hprime",
    "classinv",
    "qpoint",
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        tok_pos = m.start(1) if num else m.start(2) if name else m.start(3)
        if num:
            tokens.append(("num", num, tok_pos))
        elif name:
            tokens.append(("name", name, tok_pos))
        elif sym.strip():
            if sym not in "+-*/^(),":
                raise ParseError(f"unexpected character {sym!r}", tok_pos)
            tokens.append(("sym", sym, tok_pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym: str):
        kind, val, pos = self.next()
        if kind != "sym" or val != sym:
            raise ParseError(f"expected {sym!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.next()
                node = ("bin", val, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "*/":
                self.next()
                node = ("bin", val, node, self.unary())
            else:
                return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "sym" and val == "-":
            self.next()
            return ("neg", self.unary())
        if kind == "sym" and val == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        kind, val, pos = self.peek()
        if kind == "sym" and val == "^":
            self.next()
            exp_pos = self.peek()[2]
            exponent = _const_fold(self.unary())
            if exponent is None:
                raise ParseError("exponent must be a rational constant", exp_pos)
            return ("pow", node, exponent)
        return node

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "name":
            if val == "pi":
                return ("pi",)
            if val in _FUNCTIONS:
                self.expect("(")
                args = [self.expr()]
                while True:
                    k, v, _ = self.peek()
                    if k == "sym" and v == ",":
                        self.next()
                        args.append(self.expr())
                    else:
                        break
                self.expect(")")
                return ("call", val, tuple(args), pos)
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "sym" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError("expected a value", pos)


def _const_fold(node) -> Fraction | None:
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "neg":
        v = _const_fold(node[1])
        return None if v is None else -v
    if tag == "bin":
        a, b = _const_fold(node[2]), _const_fold(node[3])
        if a is None or b is None:
            return None
        op = node[1]
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        return a / b
    if tag == "pow":
        base = _const_fold(node[1])
        exp = node[2]
        if base is None or exp.denominator != 1:
            return None
        return base**exp.numerator
    return None


def _fold_qpoint(node) -> QPoint:
    _, _, args, pos = node
    if len(args) != 2:
        raise ParseError("qpoint takes (sign, r)", pos)
    sign = _const_fold(args[0])
    r = _const_fold(args[1])
    if sign not in (1, -1):
        raise ParseError("qpoint sign must be +1 or -1", pos)
    if r is None or r <= 0:
        raise ParseError("qpoint r must be a positive rational", pos)
    return QPoint(int(sign), r)


def _eval_node(node, ctx: PrecCtx) -> Ball:
    tag = node[0]
    f = ctx.bits
    if tag == "num":
        return Ball.from_fraction(node[1], f)
    if tag == "pi":
        return _pi_ball(f)
    if tag == "neg":
        return -_eval_node(node[1], ctx)
    if tag == "bin":
        a = _eval_node(node[2], ctx)
        b = _eval_node(node[3], ctx)
        return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[
            node[1]
        ](b)
    if tag == "pow":
        from .precision import ipow, pow_rational

        base = _eval_node(node[1], ctx)
        e = node[2]
        return ipow(base, e.numerator) if e.denominator == 1 else pow_rational(base, e)
    if tag == "call":
        return _eval_call(node, ctx)
    raise ParseError("malformed expression", 0)


def _theta_argument(node, ctx: PrecCtx):
    """phi/psi/fneg/chi accept a qpoint (kept structured) or any ball expr."""
    if node[0] == "call" and node[1] == "qpoint":
        return _fold_qpoint(node)
    return _eval_node(node, ctx)


def _rational_argument(node, name: str, pos: int) -> Fraction:
    v = _const_fold(node)
    if v is None:
        raise ParseError(f"{name} needs a rational argument", pos)
    return v


def _eval_call(node, ctx: PrecCtx) -> Ball:
    _, name, args, pos = node

    def arity(n: int):
        if len(args) != n:
            raise ParseError(f"{name} takes {n} argument(s)", pos)

    if name == "qpoint":
        return _fold_qpoint(node).to_ball(ctx)
    if name in ("phi", "psi", "fneg", "chi"):
        arity(1)
        fn = {"phi": phi, "psi": psi, "fneg": f_neg, "chi": chi}[name]
        return fn(_theta_argument(args[0], ctx), ctx)
    if name == "f":
        arity(2)
        return theta_f(_eval_node(args[0], ctx), _eval_node(args[1], ctx), ctx)
    if name == "gamma":
        arity(1)
        return gamma_rational(_rational_argument(args[0], name, pos), ctx)
    if name == "cospi":
        arity(1)
        arg = _rational_argument(args[0], name, pos)
        return cos(_pi_ball(ctx.bits + 32) * Ball.from_fraction(arg, ctx.bits + 32)).rescale(
            ctx.bits
        )
    if name == "agm":
        arity(2)
        return agm(_eval_node(args[0], ctx), _eval_node(args[1], ctx), ctx)
    if name == "hyp":
        arity(1)
        return hyp2f1_half(_eval_node(args[0], ctx), ctx)
    if name in ("h", "hprime"):
        arity(2)
        k = _rational_argument(args[0], name, pos)
        n = _rational_argument(args[1], name, pos)
        return yi_h(YiQuotient(k, n, primed=name == "hprime"), ctx)
    if name == "classinv":
        arity(1)
        from .modular import class_invariant

        return class_invariant(_rational_argument(args[0], name, pos), ctx)
    raise ParseError(f"unknown function {name!r}", pos)


# ---------------------------------------------------------------------------
# report plumbing


def _resolve_bits(args) -> int:
    if getattr(args, "prec", None):
        return args.prec
    if getattr(args, "digits", None):
        return max(64, math.ceil(args.digits * BITS_PER_DIGIT))
    env = os.environ.get("THETAVAL_PREC_BITS")
    if env:
        return int(env)
    return DEFAULT_BITS


def _entry(entry_id, status, digits, lhs_ball, runtime_ms, provenance, bits_used):
    return {
        "id": entry_id,
        "status": status,
        "agreement_digits": max(0, digits),
        "lhs_mid_decimal": decimal_str(lhs_ball, 50),
        "runtime_ms": runtime_ms,
        "provenance": provenance,
        "prec_bits_used": bits_used,
    }


def _report(prec_bits: int, entries: list[dict]) -> str:
    doc = {
        "tool_version": __version__,
        "prec_bits": prec_bits,
        "entries": entries,
    }
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, out_path: str | None):
    if out_path and out_path != "-":
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verify_worker(task: tuple[str, int, bool]) -> dict:
    entry_id, bits, timings = task
    catalog = build_catalog()
    t0 = time.monotonic()
    rep = verify_identity(catalog.get(entry_id), PrecCtx(bits))
    ms = int((time.monotonic() - t0) * 1000) if timings else 0
    return _entry(
        entry_id,
        rep.status,
        rep.agreement_digits,
        rep.lhs,
        ms,
        catalog.get(entry_id).provenance,
        rep.prec_bits_used,
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    bits = _resolve_bits(args)
    catalog = build_catalog()
    known = set(catalog.ids())
    ids = sorted(known) if args.all or not args.ids else list(args.ids)
    for entry_id in ids:
        if entry_id not in known:
            print(f"unknown catalog id: {entry_id}", file=sys.stderr)
            return 2
    ids = sorted(set(ids))
    tasks = [(entry_id, bits, args.timings) for entry_id in ids]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_worker, tasks))
    else:
        results = [_verify_worker(t) for t in tasks]
    results.sort(key=lambda e: e["id"])
    _emit(_report(bits, results), args.out)
    return 0 if all(e["status"] == "verified" for e in results) else 1


def cmd_eval(args) -> int:
    bits = _resolve_bits(args)
    try:
        node = _Parser(args.expression).parse()
        value = _eval_node(node, PrecCtx(bits))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ThetavalError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 1
    implied = int(bits / 3.3219280948873626)
    if value.m == 0:
        certified = implied
    elif value.r == 0:
        certified = implied
    else:
        mag, _ = _log10_floor(abs(value.m), value.f)
        rexp = rad_exponent(value)
        certified = max(1, mag - rexp + 1)
    shown = max(1, min(implied, 1000, certified))
    print(f"value  = {decimal_str(value, shown)}")
    rexp = rad_exponent(value)
    print(f"radius <= {'0' if rexp is None else f'1e{rexp:+d}'}")
    return 0


def _parse_grid(text: str) -> list[str]:
    return [p for p in text.split(",") if p.strip()]


def _parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _sweep_point(target: str, point: str, bits: int) -> list[tuple[str, Ball]]:
    ctx = PrecCtx(bits)
    if target == "yi_product":
        parts = [Fraction(p) for p in point.split(":")]
        if len(parts) != 5:
            raise DomainError("yi_product points are k:a:b:c:d tuples")
        return [(point, yi_product_theorem(*parts, ctx))]
    q = _parse_rational(point)
    if not 0 < q < 1:
        raise DomainError(f"grid point {point} outside (0, 1)")
    if target == "deg3":
        r1, r2 = verify_degree3(q, ctx)
        return [(f"{point}#eq", r1), (f"{point}#reciprocal", r2)]
    if target == "deg15":
        return [(point, verify_degree15(q, ctx))]
    if target == "jims":
        return [(point, jims_identity(q, ctx))]
    if target == "septic":
        u, v, w = compute_uvw(q, ctx)
        p = compute_p(q, ctx)
        fw = PrecCtx(bits + 32)
        from .qseries import phi as _phi, q_power_ball

        quot = _phi(q_power_ball(q, Fraction(1, 7), bits + 32), fw) / _phi(
            q**7, fw
        )
        res_p = p - u * v * w
        res_q = (Ball.one(bits) + u + v + w) - quot
        res_r = verify_quartic_relation(q, ctx)
        return [
            (f"{point}#p_uvw", res_p),
            (f"{point}#quotient", res_q),
            (f"{point}#quartic", res_r),
        ]
    raise DomainError(f"unknown sweep target {target}")


def _sweep_worker(task: tuple[str, str, int]) -> list[dict]:
    target, point, bits = task
    entries = []
    for label, residual in _sweep_point(target, point, bits):
        zero = Ball(0, 0, residual.f)
        entries.append(
            _entry(
                f"{target}@{label}",
                "pass" if residual.contains_zero() else "fail",
                agreement_digits(residual, zero),
                residual,
                0,
                f"residual sweep {target}",
                bits,
            )
        )
    return entries


def cmd_sweep(args) -> int:
    bits = _resolve_bits(args)
    grid = _parse_grid(args.grid or _DEFAULT_GRIDS[args.target])
    tasks = [(args.target, point, bits) for point in grid]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                groups = list(pool.map(_sweep_worker, tasks))
        else:
            groups = [_sweep_worker(t) for t in tasks]
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    entries = [e for group in groups for e in group]
    _emit(_report(bits, entries), args.out)
    return 0 if all(e["status"] == "pass" for e in entries) else 1


def cmd_complete(args) -> int:
    bits = _resolve_bits(args)
    try:
        result = complete_evaluation(PrecCtx(bits))
    except ThetavalError as exc:
        print(f"completion failed: {exc}", file=sys.stderr)
        return 1
    print(f"identity    : {render_theta(result.identity.lhs)} = {render_expr(result.identity.rhs)}")
    print(f"branch      : {result.state.branch}")
    print(f"permutation : {result.assignment.permutation_index} (of ascending roots)")
    print(f"cos pairs   : {result.cos_pairs}")
    print(f"digits      : {result.report.agreement_digits}")
    print(f"status      : {result.report.status}")
    return 0 if result.report.status == "verified" else 1


def cmd_catalog(args) -> int:
    catalog = build_catalog()
    _emit(json.dumps(catalog.json_entries(), indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p):
    p.add_argument("--prec", type=int, help="working precision in bits")
    p.add_argument(
        "--digits", type=int, help=f"decimal digit target ({BITS_PER_DIGIT} bits/digit)"
    )
    p.add_argument("--out", help="write the JSON report to this path")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--timings", action="store_true", help="record wall times")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetaval",
        description="certified verification of explicit theta-function values",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="verify catalog identities")
    p.add_argument("ids", nargs="*", help="catalog entry ids")
    p.add_argument("--all", action="store_true", help="verify every entry")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("eval", help="evaluate an expression to certified digits")
    p.add_argument("expression")
    _add_common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sweep", help="verify residual identities over a grid")
    p.add_argument("target", choices=sorted(_DEFAULT_GRIDS))
    p.add_argument("--grid", help="comma-separated points (k:a:b:c:d for yi_product)")
    _add_common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("complete", help="run the septic completion pipeline")
    _add_common(p)
    p.set_defaults(fn=cmd_complete)

    p = sub.add_parser("catalog", help="list catalog entries as JSON")
    p.add_argument("--out", help="write the JSON to this path")
    p.set_defaults(fn=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:  # bad precision, malformed numbers, ...
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ThetavalError as exc:  # evaluation failure that escaped a command
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
