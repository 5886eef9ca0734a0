"""The modular toolbox around phi: the x <-> q <-> z correspondence.

Covers the hypergeometric z = 2F1(1/2,1/2;1;x) = phi(q)^2 link, the nome
map and its closed-form inverse, the duplication / dimidiation / change of
sign substitutions, multipliers, singular moduli, class invariants, and
numeric verifiers for the degree-3 pair, the degree-15 equation, Yi's
h-quotients and product theorem, and the JIMS series identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, PreconditionViolated
from .precision import Ball, PrecCtx, agm, cos, exp, ipow, pow_rational, sin, sqrt
from .precision import _ceil_div, _pi_ball
from .qseries import QPoint, as_q_ball, phi

__all__ = [
    "ModularTriple",
    "ModulusPair",
    "YiQuotient",
    "SqrtTerm",
    "ModularEquation",
    "DEGREE3_PRIMARY",
    "modulus_pair",
    "hyp2f1_half",
    "hyp2f1_half_series",
    "nome",
    "modulus_from_q",
    "triple_from_x",
    "transform",
    "multiplier",
    "singular_modulus_sq",
    "class_invariant",
    "verify_degree3",
    "degree_relation_residual",
    "verify_degree15",
    "yi_h",
    "yi_product_theorem",
    "jims_identity",
]


# ---------------------------------------------------------------------------
# hypergeometric and nome


def _one(f: int) -> Ball:
    return Ball.one(f)


def _hyp_raw(x: Ball, fw: int) -> Ball:
    """2F1(1/2,1/2;1;x) = 1 / agm(1, sqrt(1-x)) on (0, 1); exact 1 at x = 0."""
    x = x.rescale(fw)
    if x.m == 0 and x.r == 0:
        return _one(fw)
    comp = _one(fw) - x
    if not (x.is_strictly_positive() and comp.is_strictly_positive()):
        raise DomainError("hyp2f1_half requires an enclosure inside (0, 1)")
    return _one(fw) / agm(_one(fw), sqrt(comp), PrecCtx(fw))


def hyp2f1_half(x: Ball, ctx: PrecCtx) -> Ball:
    """Complete-elliptic route for 2F1(1/2, 1/2; 1; x)."""
    return _hyp_raw(x, ctx.bits + 32).rescale(ctx.bits)


def hyp2f1_half_series(x: Ball, ctx: PrecCtx) -> Ball:
    """Direct hypergeometric series, usable as an independent oracle for
    x <= 0.7 (the term ratio is then bounded by 0.7)."""
    f = ctx.bits
    fw = f + 32
    x = x.rescale(fw)
    if 100 * x.sup_units() > 71 << fw:
        raise DomainError("series route restricted to x <= 0.7")
    if x.m - x.r < 0:
        raise DomainError("series route requires x >= 0")
    acc = _one(fw)
    t = _one(fw)
    n = 0
    for _ in range(8 * fw + 64):
        t = ((t * x) * (2 * n + 1) ** 2).div_int((2 * n + 2) ** 2)
        acc = acc + t
        n += 1
        if t.sup_units() <= 2:
            break
    tail = _ceil_div(5 * t.sup_units(), 2) + 1  # ratio <= 0.71: tail <= 2.5 t
    return Ball(acc.m, acc.r + tail, fw).rescale(f)


def nome(x: Ball, ctx: PrecCtx) -> Ball:
    """q(x) = exp(-pi * 2F1(.., 1-x) / 2F1(.., x))."""
    f = ctx.bits
    fw = f + 32
    x = x.rescale(fw)
    quotient = _hyp_raw(_one(fw) - x, fw) / _hyp_raw(x, fw)
    return exp(-(_pi_ball(fw) * quotient)).rescale(f)


def modulus_from_q(q, ctx: PrecCtx) -> Ball:
    """Closed-form nome inversion x = 1 - (phi(-q)/phi(q))^4, 0 < q < 1."""
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)
    if isinstance(q, QPoint):
        if q.sign != 1:
            raise DomainError("modulus_from_q requires a positive nome")
        ratio = phi(QPoint(-1, q.r), wctx) / phi(q, wctx)
    else:
        qb = as_q_ball(q, fw)
        if not qb.is_strictly_positive() or not qb.mag_lt_one():
            raise DomainError("modulus_from_q requires 0 < q < 1")
        ratio = phi(-qb, wctx) / phi(qb, wctx)
    return (_one(fw) - ipow(ratio, 4)).rescale(f)


# ---------------------------------------------------------------------------
# the (x, q, z) triple and its three substitutions


@dataclass(frozen=True)
class ModularTriple:
    """A triple satisfying z = 2F1(1/2,1/2;1;x) = phi(q)^2 (q possibly signed)."""

    x: Ball
    q: Ball
    z: Ball


@dataclass(frozen=True)
class ModulusPair:
    """Degree-n pair of moduli-squared with its multiplier m = phi^2(q)/phi^2(q^n)."""

    alpha: Ball
    beta: Ball
    n: int
    m: Ball


def triple_from_x(x: Ball, ctx: PrecCtx) -> ModularTriple:
    return ModularTriple(
        x.rescale(ctx.bits), nome(x, ctx), hyp2f1_half(x, ctx)
    )


def transform(t: ModularTriple, kind: str, ctx: PrecCtx) -> ModularTriple:
    """Apply duplication, dimidiation or change_of_sign to a triple."""
    f = ctx.bits
    fw = f + 32
    x, q, z = t.x.rescale(fw), t.q.rescale(fw), t.z.rescale(fw)
    one = _one(fw)
    if kind == "duplication":
        s = sqrt(one - x)
        x2 = ipow((one - s) / (one + s), 2)
        q2 = q * q
        z2 = (z * (one + s)).half()
    elif kind == "dimidiation":
        if not x.is_strictly_positive():
            raise DomainError("dimidiation requires x > 0")
        if not q.is_strictly_positive():
            raise DomainError("dimidiation requires a positive nome")
        s = sqrt(x)
        x2 = (s * 4) / ipow(one + s, 2)
        q2 = sqrt(q)
        z2 = z * (one + s)
    elif kind == "change_of_sign":
        den = x - one
        if not den.is_strictly_negative():
            raise DomainError("change_of_sign requires x < 1")
        x2 = x / den
        q2 = -q
        z2 = z * sqrt(one - x)
    else:
        raise ValueError(f"unknown transform {kind!r}")
    return ModularTriple(x2.rescale(f), q2.rescale(f), z2.rescale(f))


# ---------------------------------------------------------------------------
# multipliers, singular moduli, class invariants


def multiplier(q, n: int, ctx: PrecCtx) -> Ball:
    """m = phi(q)^2 / phi(q^n)^2."""
    if n < 1:
        raise DomainError("multiplier degree must be a positive integer")
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)
    if isinstance(q, QPoint):
        qn = q.pow(n)
    else:
        qn = ipow(as_q_ball(q, fw), n)
    num = phi(q, wctx)
    den = phi(qn, wctx)
    return ipow(num / den, 2).rescale(f)


def singular_modulus_sq(n, ctx: PrecCtx) -> Ball:
    """alpha_n: the modulus-squared attached to the nome e^(-pi sqrt(n))."""
    n = Fraction(n)
    if n <= 0:
        raise DomainError("singular modulus index must be positive")
    return modulus_from_q(QPoint(1, n), ctx)


def class_invariant(n, ctx: PrecCtx) -> Ball:
    """G_n = 2^(-1/4) q^(-1/24) chi(q) at q = e^(-pi sqrt(n)).

    q^(-1/24) = exp(pi sqrt(n)/24) is taken from the exact exponent, not
    from a root of the tiny nome enclosure.
    """
    from .qseries import chi

    n = Fraction(n)
    if n <= 0:
        raise DomainError("class invariant index must be positive")
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)
    root = sqrt(Ball.from_fraction(n, fw))
    q_pow = exp((_pi_ball(fw) * root).div_int(24))
    two_qtr = pow_rational(Ball.from_fraction(2, fw), Fraction(-1, 4))
    return (two_qtr * q_pow * chi(QPoint(1, n), wctx)).rescale(f)


# ---------------------------------------------------------------------------
# degree-3 modular equation pair, with the reciprocal rewrite as data


@dataclass(frozen=True)
class SqrtTerm:
    """coef * sqrt(alpha^e1 (1-alpha)^e2 beta^e3 (1-beta)^e4)."""

    coef: int
    exps: tuple[int, int, int, int]


@dataclass(frozen=True)
class ModularEquation:
    """m_coef * m^m_pow = sum of square-root terms in alpha and beta."""

    degree: int
    m_coef: int
    m_pow: int
    terms: tuple[SqrtTerm, ...]

    def reciprocal(self) -> "ModularEquation":
        """Swap alpha -> 1-beta, beta -> 1-alpha, m -> degree/m."""
        new_terms = tuple(
            SqrtTerm(t.coef, (t.exps[3], t.exps[2], t.exps[1], t.exps[0]))
            for t in self.terms
        )
        return ModularEquation(
            self.degree,
            self.m_coef * self.degree**self.m_pow,
            -self.m_pow,
            new_terms,
        )

    def residual(self, alpha: Ball, beta: Ball, m: Ball, ctx: PrecCtx) -> Ball:
        fw = ctx.bits + 32
        one = _one(fw)
        factors = (
            alpha.rescale(fw),
            one - alpha.rescale(fw),
            beta.rescale(fw),
            one - beta.rescale(fw),
        )
        lhs = ipow(m.rescale(fw), self.m_pow) * self.m_coef
        rhs = Ball(0, 0, fw)
        for term in self.terms:
            num = one
            den = one
            for base, e in zip(factors, term.exps):
                if e > 0:
                    num = num * ipow(base, e)
                elif e < 0:
                    den = den * ipow(base, -e)
            rhs = rhs + sqrt(num / den) * term.coef
        return (lhs - rhs).rescale(ctx.bits)


DEGREE3_PRIMARY = ModularEquation(
    degree=3,
    m_coef=1,
    m_pow=2,
    terms=(
        SqrtTerm(1, (-1, 0, 1, 0)),  # sqrt(beta/alpha)
        SqrtTerm(1, (0, -1, 0, 1)),  # sqrt((1-beta)/(1-alpha))
        SqrtTerm(-1, (-1, -1, 1, 1)),  # -sqrt(beta(1-beta)/(alpha(1-alpha)))
    ),
)


def modulus_pair(q, n: int, ctx: PrecCtx) -> ModulusPair:
    """The degree-n pair at a nome: beta is *defined* as the modulus-squared
    of q^n, so the printed degree-n relations become checkable residuals."""
    alpha = modulus_from_q(q, ctx)
    qn = q.pow(n) if isinstance(q, QPoint) else ipow(as_q_ball(q, ctx.bits), n)
    beta = modulus_from_q(qn, ctx)
    return ModulusPair(alpha, beta, n, multiplier(q, n, ctx))


def verify_degree3(q, ctx: PrecCtx) -> tuple[Ball, Ball]:
    """Residuals of the degree-3 multiplier equation and its reciprocal;
    both must contain 0."""
    pair = modulus_pair(q, 3, PrecCtx(ctx.bits + 32))
    r1 = DEGREE3_PRIMARY.residual(pair.alpha, pair.beta, pair.m, ctx)
    r2 = DEGREE3_PRIMARY.reciprocal().residual(pair.alpha, pair.beta, pair.m, ctx)
    return r1, r2


def degree_relation_residual(q, n: int, ctx: PrecCtx) -> Ball:
    """n * F(1-alpha)/F(alpha) - F(1-beta)/F(beta) with beta from q^n."""
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)
    one = _one(fw)
    alpha = modulus_from_q(q, wctx).rescale(fw)
    qn = q.pow(n) if isinstance(q, QPoint) else ipow(as_q_ball(q, fw), n)
    beta = modulus_from_q(qn, wctx).rescale(fw)
    lhs = (_hyp_raw(one - alpha, fw) / _hyp_raw(alpha, fw)) * n
    rhs = _hyp_raw(one - beta, fw) / _hyp_raw(beta, fw)
    return (lhs - rhs).rescale(f)


# ---------------------------------------------------------------------------
# degree 15 and the Yi quotients


def verify_degree15(q, ctx: PrecCtx) -> Ball:
    """Residual of PQ + 5/PQ = (Q/P)^2 + 3(Q/P) + 3(P/Q) - (P/Q)^2
    with P = phi(q)/phi(q^5) and Q = phi(q^3)/phi(q^15)."""
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)

    def _phi_pow(k: int) -> Ball:
        if isinstance(q, QPoint):
            return phi(q.pow(k), wctx)
        return phi(ipow(as_q_ball(q, fw), k), wctx)

    p = _phi_pow(1) / _phi_pow(5)
    qq = _phi_pow(3) / _phi_pow(15)
    pq = p * qq
    ratio = qq / p
    inv = p / qq
    lhs = pq + Ball.from_fraction(5, fw) / pq
    rhs = ipow(ratio, 2) + ratio * 3 + inv * 3 - ipow(inv, 2)
    return (lhs - rhs).rescale(f)


@dataclass(frozen=True)
class YiQuotient:
    """h_{k,n} (or the primed variant on -e^(-2 pi sqrt(.)) nomes)."""

    k: Fraction
    n: Fraction
    primed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))
        object.__setattr__(self, "n", Fraction(self.n))
        if self.k <= 0 or self.n <= 0:
            raise DomainError("Yi quotient parameters must be positive")


def yi_h(hq: YiQuotient, ctx: PrecCtx) -> Ball:
    """h_{k,n} = phi(e^(-pi sqrt(n/k))) / (k^(1/4) phi(e^(-pi sqrt(n k)))),
    with nomes -e^(-2 pi sqrt(.)) for the primed variant."""
    f = ctx.bits
    fw = f + 32
    wctx = PrecCtx(fw)
    k, n = hq.k, hq.n
    if hq.primed:
        num = phi(QPoint(-1, 4 * n / k), wctx)
        den = phi(QPoint(-1, 4 * n * k), wctx)
    else:
        num = phi(QPoint(1, n / k), wctx)
        den = phi(QPoint(1, n * k), wctx)
    kq = pow_rational(Ball.from_fraction(k, fw), Fraction(1, 4))
    return (num / (kq * den)).rescale(f)


def yi_product_theorem(k, a, b, c, d, ctx: PrecCtx) -> Ball:
    """Residual of h_{a,b} h_{kc,kd} - h_{ka,kb} h_{c,d}, requiring ab = cd."""
    k, a, b, c, d = (Fraction(v) for v in (k, a, b, c, d))
    if a * b != c * d:
        raise PreconditionViolated("the product theorem requires ab = cd")
    wctx = PrecCtx(ctx.bits + 32)
    lhs = yi_h(YiQuotient(a, b), wctx) * yi_h(YiQuotient(k * c, k * d), wctx)
    rhs = yi_h(YiQuotient(k * a, k * b), wctx) * yi_h(YiQuotient(c, d), wctx)
    return (lhs - rhs).rescale(ctx.bits)


# ---------------------------------------------------------------------------
# the JIMS series identity


def jims_identity(x, ctx: PrecCtx) -> Ball:
    """Residual of
    1/2 + sum e^(-pi n^2 x) cos(pi n^2 sqrt(1-x^2))
      = (sqrt2 + sqrt(1+x)) / sqrt(1-x) * sum e^(-pi n^2 x) sin(...),
    for x inside (0, 1); both tails are certified geometrically."""
    f = ctx.bits
    x0 = as_q_ball(x, f + 32) if not isinstance(x, Ball) else x
    xf = x0.to_float()
    if not 0.0 < xf < 1.0:
        raise DomainError("jims_identity requires x inside (0, 1)")
    count = int(math.sqrt((f + 48) * math.log(2) / (math.pi * xf))) + 2
    fw = f + 64 + 2 * count.bit_length() + 4
    xb = x0.rescale(fw)
    one = _one(fw)
    if not (xb.is_strictly_positive() and (one - xb).is_strictly_positive()):
        raise DomainError("jims_identity requires x inside (0, 1)")
    pi = _pi_ball(fw)
    y = sqrt(one - xb * xb)
    decay = exp(-(pi * xb))  # e^(-pi x)
    angle1 = pi * y  # pi sqrt(1-x^2)
    sum_cos = Ball(0, 0, fw)
    sum_sin = Ball(0, 0, fw)
    t = decay  # e^(-pi x n^2)
    step = decay  # e^(-pi x (2n-1))
    d2 = decay * decay
    for n in range(1, count + 1):
        angle = angle1 * (n * n)
        sum_cos = sum_cos + t * cos(angle)
        sum_sin = sum_sin + t * sin(angle)
        step = step * d2
        t = t * step
    # tail: terms fall by at least e^(-pi x (2N+3)) per step
    tail_head = t  # e^(-pi x (N+1)^2), as left by the loop
    ratio = ipow(decay, 2 * count + 3)
    denom = one - ratio
    if not denom.is_strictly_positive():
        raise DomainError("jims tail bound failed")
    tail = (tail_head / denom).sup_units() + 1
    sum_cos = Ball(sum_cos.m, sum_cos.r + tail, fw)
    sum_sin = Ball(sum_sin.m, sum_sin.r + tail, fw)
    two = Ball.from_fraction(2, fw)
    prefac = (sqrt(two) + sqrt(one + xb)) / sqrt(one - xb)
    residual = (one.half() + sum_cos) - prefac * sum_sin
    return residual.rescale(f)
