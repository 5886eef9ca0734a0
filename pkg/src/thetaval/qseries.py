"""Certified evaluation of Ramanujan's theta functions.

Provides f(a,b), phi, psi, f(-q) and chi with two independent routes:
infinite q-Pochhammer products (the default; geometric convergence) and
the defining series (kept as a cross-check oracle).  Every truncation is
covered by an explicit tail bound that is computed rigorously in ball
arithmetic and folded into the output radius, never assumed from a
heuristic term count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, FactorNearZero, NotConvergent
from .precision import Ball, PrecCtx, ipow, pow_rational
from .precision import _pi_ball, exp, sqrt  # noqa: F401  (pi needed for nomes)

__all__ = [
    "QPoint",
    "SeriesTail",
    "pochhammer_inf",
    "theta_f",
    "phi",
    "phi_series",
    "psi",
    "psi_series",
    "f_neg",
    "f_neg_series",
    "chi",
    "as_q_ball",
    "q_power_ball",
]


@dataclass(frozen=True)
class QPoint:
    """Structured nome q = sign * exp(-pi * sqrt(r)) with exact rational r > 0."""

    sign: int
    r: Fraction

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError("QPoint sign must be +1 or -1")
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r <= 0:
            raise DomainError("QPoint exponent parameter r must be positive")

    def pow(self, k) -> "QPoint":
        """q**k by exact bookkeeping on r; fractional k needs sign = +1."""
        k = Fraction(k)
        if k <= 0:
            raise DomainError("QPoint powers must be positive")
        if k.denominator != 1 and self.sign == -1:
            raise DomainError("fractional powers of a negative nome are rejected")
        sign = self.sign if k.numerator % 2 else 1
        return QPoint(sign, self.r * k * k)

    def to_ball(self, ctx: PrecCtx) -> Ball:
        return _qpoint_ball(self.sign, self.r, ctx.bits)


_QPOINT_CACHE: dict[tuple[int, Fraction, int], Ball] = {}
_THETA_CACHE: dict[tuple, Ball] = {}


def _qpoint_ball(sign: int, r: Fraction, f: int) -> Ball:
    key = (sign, r, f)
    cached = _QPOINT_CACHE.get(key)
    if cached is None:
        fw = f + 32
        root = sqrt(Ball.from_fraction(r, fw))
        cached = exp(-(_pi_ball(fw) * root)).rescale(f)
        if sign == -1:
            cached = -cached
        _QPOINT_CACHE[key] = cached
    return cached


def as_q_ball(q, f: int) -> Ball:
    """Enclosure of a nome given as QPoint, Ball, Fraction or int."""
    if isinstance(q, QPoint):
        return _qpoint_ball(q.sign, q.r, f)
    if isinstance(q, Ball):
        return q.rescale(f) if q.f < f else q
    return Ball.from_fraction(q, f)


def q_power_ball(q, k, f: int) -> Ball:
    """Enclosure of q**k with exact exponent bookkeeping for QPoints."""
    k = Fraction(k)
    if isinstance(q, QPoint):
        return _qpoint_ball(*_qpow_key(q, k), f)
    qb = as_q_ball(q, f)
    return pow_rational(qb, k) if k.denominator != 1 else ipow(qb, k.numerator)


def _qpow_key(q: QPoint, k: Fraction) -> tuple[int, Fraction]:
    p = q.pow(k)
    return p.sign, p.r


@dataclass(frozen=True)
class SeriesTail:
    """Truncation certificate: proven bound on the dropped remainder."""

    terms_used: int
    tail_bound: Fraction


# ---------------------------------------------------------------------------
# q-Pochhammer products


def _check_q(qb: Ball):
    if not qb.mag_lt_one():
        raise NotConvergent("|q| enclosure must lie strictly below 1")


def _pochhammer_raw(a: Ball, q: Ball, fw: int) -> Ball:
    """(a; q)_inf at working scale fw with a certified product tail.

    The dropped factors k >= K satisfy
    |log prod| <= |a||q|^K / ((1 - |a||q|^K)(1 - |q|)).
    """
    a = a.rescale(fw)
    q = q.rescale(fw)
    _check_q(q)
    qmag = q.mag_upper()
    amag = a.mag_upper()
    one = Ball.one(fw)
    if amag.m == 0:
        return one
    # heuristic factor count, then rigorous verification of the tail bound
    qf, af = qmag.to_float(), amag.to_float()
    if qf <= 0.0:
        count = 1
    else:
        count = (
            int(
                (fw + 8 + max(0.0, math.log2(af)) - math.log2(1.0 - qf))
                / -math.log2(qf)
            )
            + 4
        )
    tail_units = None
    for _ in range(8):
        mk = amag * ipow(qmag, count)
        if 2 * mk.sup_units() < 1 << fw:
            bound = mk / ((one - mk) * (one - qmag))
            if bound.sup_units() <= 64:  # <= 2^-(fw-7); fw carries 32 guard bits
                tail_units = 2 * bound.sup_units() + 1
                break
        count *= 2
    if tail_units is None:
        raise NotConvergent("could not certify the q-product tail")
    prod = one
    aq = a
    for _ in range(count):
        factor = one - aq
        if factor.contains_zero():
            raise FactorNearZero("1 - a q^k cannot be bounded away from zero")
        prod = prod * factor
        aq = aq * q
    # remaining factors lie in [e^-L, e^L] with L <= 64 ulps: e^L - 1 <= 2L
    return prod * Ball(1 << fw, tail_units, fw)


def pochhammer_inf(a: Ball, q: Ball, ctx: PrecCtx) -> Ball:
    """Certified enclosure of the infinite product (a; q)_inf."""
    f = ctx.bits
    return _pochhammer_raw(a, q, f + 32).rescale(f)


# ---------------------------------------------------------------------------
# the general theta function f(a, b)


def theta_f(a: Ball, b: Ball, ctx: PrecCtx) -> Ball:
    """Certified enclosure of sum_n a^(n(n+1)/2) b^(n(n-1)/2), |ab| < 1."""
    f = ctx.bits
    fw = f + 32
    a = a.rescale(fw)
    b = b.rescale(fw)
    ab = a * b
    if not ab.mag_lt_one():
        raise NotConvergent("|ab| enclosure must lie strictly below 1")
    acc = Ball.one(fw)
    tp, tm = a, b  # n = 1 and n = -1 terms
    ra, rb = a * ab, b * ab  # term ratios a^(n+1) b^n and b^(n+1) a^n at n = 1
    half = 1 << (fw - 1)
    for _ in range(8 * fw + 64):
        acc = acc + tp + tm
        done = (
            tp.sup_units() <= 2
            and tm.sup_units() <= 2
            and ra.sup_units() <= half
            and rb.sup_units() <= half
        )
        if done:
            break
        tp = tp * ra
        tm = tm * rb
        ra = ra * ab
        rb = rb * ab
    else:
        raise NotConvergent("theta series failed to reach its tail target")
    # ratios keep shrinking by |ab| < 1, so each wing tail <= current term
    tail = tp.sup_units() + tm.sup_units() + 2
    return Ball(acc.m, acc.r + tail, fw).rescale(f)


# ---------------------------------------------------------------------------
# special cases: phi, psi, f(-q), chi


def _theta_cache_get(kind: str, q, f: int):
    if isinstance(q, QPoint):
        return _THETA_CACHE.get((kind, q.sign, q.r, f))
    return None


def _theta_cache_put(kind: str, q, f: int, val: Ball):
    if isinstance(q, QPoint):
        _THETA_CACHE[(kind, q.sign, q.r, f)] = val


def phi(q, ctx: PrecCtx) -> Ball:
    """phi(q) = sum q^(n^2) via the product (-q; q^2)^2 (q^2; q^2)."""
    f = ctx.bits
    cached = _theta_cache_get("phi", q, f)
    if cached is not None:
        return cached
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    q2 = qb * qb
    p1 = _pochhammer_raw(-qb, q2, fw)
    p2 = _pochhammer_raw(q2, q2, fw)
    val = (p1 * p1 * p2).rescale(f)
    _theta_cache_put("phi", q, f, val)
    return val


def phi_series(q, ctx: PrecCtx, min_terms: int = 0, with_tail: bool = False):
    """Series route 1 + 2 sum q^(n^2); tail 2|q|^((N+1)^2)/(1-|q|^(2N+3))."""
    f = ctx.bits
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    one = Ball.one(fw)
    q2 = qb * qb
    acc = one
    t = qb  # q^(n^2)
    step = qb  # q^(2n-1)
    n = 1
    for _ in range(8 * fw + 64):
        acc = acc + t * 2
        if t.sup_units() <= 1 and n >= min_terms:
            break
        step = step * q2
        t = t * step
        n += 1
    else:
        raise NotConvergent("phi series failed to reach its tail target")
    qmag = qb.mag_upper()
    num = ipow(qmag, (n + 1) ** 2) * 2
    den = one - ipow(qmag, 2 * n + 3)
    if not den.is_strictly_positive():
        raise NotConvergent("phi series tail bound failed")
    tail = (num / den).sup_units() + 1
    out = Ball(acc.m, acc.r + tail, fw).rescale(f)
    if with_tail:
        return out, SeriesTail(n, Fraction(tail, 1 << fw))
    return out


def psi(q, ctx: PrecCtx) -> Ball:
    """psi(q) = sum_{n>=0} q^(n(n+1)/2) via (q^2; q^2)/(q; q^2)."""
    f = ctx.bits
    cached = _theta_cache_get("psi", q, f)
    if cached is not None:
        return cached
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    q2 = qb * qb
    num = _pochhammer_raw(q2, q2, fw)
    den = _pochhammer_raw(qb, q2, fw)
    val = (num / den).rescale(f)
    _theta_cache_put("psi", q, f, val)
    return val


def psi_series(q, ctx: PrecCtx, min_terms: int = 0, with_tail: bool = False):
    """Series route; tail |q|^(T(N+1)) / (1 - |q|^(N+2))."""
    f = ctx.bits
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    one = Ball.one(fw)
    acc = one
    t = one
    qn = one  # q^n
    n = 0
    for _ in range(8 * fw + 64):
        qn = qn * qb
        t = t * qn  # q^(T(n+1))
        n += 1
        acc = acc + t
        if t.sup_units() <= 1 and n >= min_terms:
            break
    else:
        raise NotConvergent("psi series failed to reach its tail target")
    qmag = qb.mag_upper()
    num = ipow(qmag, (n + 1) * (n + 2) // 2)
    den = one - ipow(qmag, n + 2)
    if not den.is_strictly_positive():
        raise NotConvergent("psi series tail bound failed")
    tail = (num / den).sup_units() + 1
    out = Ball(acc.m, acc.r + tail, fw).rescale(f)
    if with_tail:
        return out, SeriesTail(n, Fraction(tail, 1 << fw))
    return out


def f_neg(q, ctx: PrecCtx) -> Ball:
    """f(-q) = (q; q)_inf."""
    f = ctx.bits
    cached = _theta_cache_get("f_neg", q, f)
    if cached is not None:
        return cached
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    val = _pochhammer_raw(qb, qb, fw).rescale(f)
    _theta_cache_put("f_neg", q, f, val)
    return val


def f_neg_series(q, ctx: PrecCtx, min_terms: int = 0, with_tail: bool = False):
    """Pentagonal-number series sum (-1)^n q^(n(3n-1)/2), both wings."""
    f = ctx.bits
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    one = Ball.one(fw)
    q2 = qb * qb
    acc = one
    cur = one  # q^e, walking e = 0 -> 1 -> 2 -> 5 -> 7 -> 12 -> ...
    qa = qb  # q^(2n-1)
    qn = qb  # q^n
    n = 1
    for _ in range(8 * fw + 64):
        cur = cur * qa  # exponent n(3n-1)/2
        t1 = cur
        cur = cur * qn  # exponent n(3n+1)/2
        t2 = cur
        acc = acc + (t1 + t2) * (-1 if n % 2 else 1)
        if t1.sup_units() <= 1 and t2.sup_units() <= 1 and n >= min_terms:
            break
        qa = qa * q2
        qn = qn * qb
        n += 1
    else:
        raise NotConvergent("pentagonal series failed to reach its tail target")
    # next exponent is (n+1)(3n+2)/2; at most one term per exponent beyond it
    qmag = qb.mag_upper()
    num = ipow(qmag, (n + 1) * (3 * n + 2) // 2)
    den = one - qmag
    if not den.is_strictly_positive():
        raise NotConvergent("pentagonal series tail bound failed")
    tail = (num / den).sup_units() + 1
    out = Ball(acc.m, acc.r + tail, fw).rescale(f)
    if with_tail:
        return out, SeriesTail(n, Fraction(tail, 1 << fw))
    return out


def chi(q, ctx: PrecCtx) -> Ball:
    """chi(q) = (-q; q^2)_inf."""
    f = ctx.bits
    cached = _theta_cache_get("chi", q, f)
    if cached is not None:
        return cached
    fw = f + 32
    qb = as_q_ball(q, fw)
    _check_q(qb)
    val = _pochhammer_raw(-qb, qb * qb, fw).rescale(f)
    _theta_cache_put("chi", q, f, val)
    return val
