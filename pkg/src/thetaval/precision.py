"""Certified midpoint-radius (ball) arithmetic on dyadic fixed-point integers.

A :class:`Ball` stores an integer mantissa ``m``, a nonnegative integer
radius ``r`` and a scale ``f``; it encloses every real number in
``[(m - r) * 2**-f, (m + r) * 2**-f]``.  Every operation rounds the
midpoint by at most one unit in the last place and folds that rounding,
together with the propagated input radii and any series truncation bound,
into the output radius.  Enclosures are therefore certified by
construction; nothing relies on a library's "usually correctly rounded"
promise.

Binary operations between balls work at the finer of the two scales
(coarser operands are rescaled exactly), so precision is set where leaf
values are created, normally from a :class:`PrecCtx`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisorStraddlesZero,
    DomainError,
    NegativeBaseEvenRoot,
    UnsupportedArgument,
)

__all__ = [
    "PrecCtx",
    "Ball",
    "ball_arith",
    "elementary",
    "const_pi",
    "agm",
    "gamma_rational",
    "exp",
    "log",
    "sqrt",
    "nth_root",
    "cos",
    "sin",
    "ipow",
    "pow_rational",
    "agreement_digits",
    "decimal_str",
    "rad_exponent",
]

_LOG2_10 = 3.321928094887362  # bits per decimal digit
_LOG2_2PI = 2.6514961294723187


@dataclass(frozen=True)
class PrecCtx:
    """Working precision in bits; shared by a whole call tree."""

    bits: int = 512

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("working precision must be at least 64 bits")

    def escalated(self, doublings: int = 1) -> "PrecCtx":
        return PrecCtx(self.bits << doublings)

    @property
    def decimal_digits(self) -> int:
        return int(self.bits / _LOG2_10)


# ---------------------------------------------------------------------------
# integer helpers


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _round_shift(v: int, s: int) -> tuple[int, int]:
    """Round v / 2**s to nearest; returns (quotient, 0-or-1 error units)."""
    if s <= 0:
        return v << (-s), 0
    err = 0 if v & ((1 << s) - 1) == 0 else 1
    return (v + (1 << (s - 1))) >> s, err


def _ceil_shift(v: int, s: int) -> int:
    if s <= 0:
        return v << (-s)
    return (v + (1 << s) - 1) >> s


def _round_div(a: int, b: int) -> tuple[int, int]:
    """Round a / b (b != 0) to nearest; returns (quotient, 0-or-1 error)."""
    if b < 0:
        a, b = -a, -b
    err = 0 if a % b == 0 else 1
    return (2 * a + b) // (2 * b), err


def _iroot(n: int, k: int) -> int:
    """Floor integer k-th root of n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << _ceil_div(n.bit_length(), k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


# ---------------------------------------------------------------------------
# the Ball type


class Ball:
    """Certified enclosure [(m-r)*2^-f, (m+r)*2^-f] of a real number."""

    __slots__ = ("m", "r", "f")

    def __init__(self, m: int, r: int, f: int):
        if r < 0:
            raise ValueError("radius must be nonnegative")
        self.m = m
        self.r = r
        self.f = f

    # -- constructors -------------------------------------------------

    @staticmethod
    def exact_int(k: int) -> "Ball":
        return Ball(k, 0, 0)

    @staticmethod
    def one(f: int) -> "Ball":
        return Ball(1 << f, 0, f)

    @staticmethod
    def from_fraction(x, bits: int) -> "Ball":
        """Round a Fraction (or int) to the given scale; radius <= 1 ulp."""
        x = Fraction(x)
        m, err = _round_div(x.numerator << bits, x.denominator)
        return Ball(m, err, bits)

    @staticmethod
    def hull(a: "Ball", b: "Ball") -> "Ball":
        f = max(a.f, b.f)
        a, b = a.rescale(f), b.rescale(f)
        lo = min(a.m - a.r, b.m - b.r)
        hi = max(a.m + a.r, b.m + b.r)
        mid = (lo + hi) >> 1
        return Ball(mid, _ceil_div(hi - lo, 2) + 1, f)

    # -- inspection ---------------------------------------------------

    def rescale(self, f2: int) -> "Ball":
        if f2 == self.f:
            return self
        if f2 > self.f:
            s = f2 - self.f
            return Ball(self.m << s, self.r << s, f2)
        s = self.f - f2
        m, err = _round_shift(self.m, s)
        return Ball(m, _ceil_shift(self.r, s) + err, f2)

    @property
    def mid(self) -> Fraction:
        return Fraction(self.m, 1 << self.f)

    @property
    def rad(self) -> Fraction:
        return Fraction(self.r, 1 << self.f)

    @property
    def lower(self) -> Fraction:
        return Fraction(self.m - self.r, 1 << self.f)

    @property
    def upper(self) -> Fraction:
        return Fraction(self.m + self.r, 1 << self.f)

    def contains(self, x) -> bool:
        x = Fraction(x)
        return abs(x.numerator * (1 << self.f) - self.m * x.denominator) <= (
            self.r * x.denominator
        )

    def overlaps(self, other: "Ball") -> bool:
        f = max(self.f, other.f)
        a, b = self.rescale(f), other.rescale(f)
        return abs(a.m - b.m) <= a.r + b.r

    def encloses(self, other: "Ball") -> bool:
        """True when the other enclosure lies entirely inside this one."""
        f = max(self.f, other.f)
        a, b = self.rescale(f), other.rescale(f)
        return a.m - a.r <= b.m - b.r and b.m + b.r <= a.m + a.r

    def contains_zero(self) -> bool:
        return abs(self.m) <= self.r

    def is_strictly_positive(self) -> bool:
        return self.m - self.r > 0

    def is_strictly_negative(self) -> bool:
        return self.m + self.r < 0

    def mag_upper(self) -> "Ball":
        """Exact point ball holding an upper bound of |self|."""
        return Ball(abs(self.m) + self.r, 0, self.f)

    def mag_lt_one(self) -> bool:
        return abs(self.m) + self.r < (1 << self.f)

    def sup_units(self) -> int:
        return abs(self.m) + self.r

    def to_float(self) -> float:
        s = self.m.bit_length() - 53
        try:
            if s > 0:
                return math.ldexp(self.m >> s, s - self.f)
            return math.ldexp(self.m, -self.f)
        except OverflowError:
            return math.inf if self.m > 0 else -math.inf

    def half(self) -> "Ball":
        return Ball(self.m, self.r, self.f + 1)

    def div_int(self, k: int) -> "Ball":
        m, err = _round_div(self.m, k)
        return Ball(m, _ceil_div(self.r, abs(k)) + err, self.f)

    # -- arithmetic ---------------------------------------------------

    def __neg__(self) -> "Ball":
        return Ball(-self.m, self.r, self.f)

    def _coerce(self, other):
        if isinstance(other, Ball):
            return other
        if isinstance(other, int):
            return Ball.exact_int(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = max(self.f, other.f)
        a, b = self.rescale(f), other.rescale(f)
        return Ball(a.m + b.m, a.r + b.r, f)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):  # exact integer scaling
            return Ball(self.m * other, self.r * abs(other), self.f)
        if not isinstance(other, Ball):
            return NotImplemented
        f = max(self.f, other.f)
        a, b = self.rescale(f), other.rescale(f)
        m, err = _round_shift(a.m * b.m, f)
        prop = abs(a.m) * b.r + abs(b.m) * a.r + a.r * b.r
        return Ball(m, _ceil_shift(prop, f) + err, f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = max(self.f, other.f)
        a, b = self.rescale(f), other.rescale(f)
        abs_b = abs(b.m)
        if abs_b <= b.r:
            raise DivisorStraddlesZero("divisor enclosure contains zero")
        q, err = _round_div(a.m << f, b.m)
        num = a.r * abs_b + abs(a.m) * b.r
        den = (abs_b - b.r) * abs_b
        return Ball(q, _ceil_div(num << f, den) + err, f)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, e):
        if isinstance(e, int):
            return ipow(self, e)
        if isinstance(e, Fraction):
            return pow_rational(self, e)
        return NotImplemented

    def __repr__(self):
        return f"Ball({decimal_str(self, 12)} +/- {rad_exponent_str(self)})"


# ---------------------------------------------------------------------------
# powers and roots


def ipow(x: Ball, k: int) -> Ball:
    if k < 0:
        return Ball.one(x.f) / ipow(x, -k)
    result = Ball.one(x.f)
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def sqrt(x: Ball, ctx: PrecCtx | None = None) -> Ball:
    f = ctx.bits if ctx is not None else x.f
    a = x.rescale(f)
    if not a.is_strictly_positive():
        raise DomainError("sqrt requires a strictly positive enclosure")
    s = math.isqrt(a.m << f)
    if a.r == 0:
        return Ball(s, 1, f)
    lo = a.m - a.r
    slo = math.isqrt(lo << f)
    return Ball(s, _ceil_div(a.r << f, 2 * slo) + 1, f)


def nth_root(x: Ball, n: int, ctx: PrecCtx | None = None) -> Ball:
    if n < 1:
        raise DomainError("root order must be positive")
    if n == 1:
        return x if ctx is None else x.rescale(ctx.bits)
    if n == 2:
        return sqrt(x, ctx)
    f = ctx.bits if ctx is not None else x.f
    a = x.rescale(f)
    if a.is_strictly_negative() and n % 2 == 1:
        return -nth_root(-a, n)
    if not a.is_strictly_positive():
        raise DomainError("nth_root requires a strictly positive enclosure")
    s = _iroot(a.m << (f * (n - 1)), n)
    lo = a.m - a.r
    rl = _iroot(lo << (f * (n - 1)), n)
    return Ball(s, _ceil_div(a.r * (rl + 1), n * lo) + 1, f)


def pow_rational(x: Ball, e, ctx: PrecCtx | None = None) -> Ball:
    """x**(p/q).  Fractional exponents require a strictly positive base.

    Small root orders go through the integer root (tight); large ones
    through the certified exp(e log x) route, which stays cheap.
    """
    e = Fraction(e)
    f = ctx.bits if ctx is not None else x.f
    num, den = e.numerator, e.denominator
    if den == 1:
        return ipow(x, num).rescale(f)
    if not x.is_strictly_positive():
        raise NegativeBaseEvenRoot(
            "fractional powers are defined for strictly positive bases only"
        )
    fw = f + 32 + abs(num).bit_length() + den.bit_length()
    if den > 64:
        return exp(log(x.rescale(fw)) * Ball.from_fraction(e, fw)).rescale(f)
    root = nth_root(x.rescale(fw), den)
    return ipow(root, num).rescale(f)


# ---------------------------------------------------------------------------
# pi (Machin's formula on integers), ln 2, e


_PI_CACHE: dict[int, tuple[int, int]] = {}
_LN2_CACHE: dict[int, Ball] = {}
_E_CACHE: dict[int, Ball] = {}
_GAMMA_CACHE: dict[tuple[Fraction, int], Ball] = {}


def _atan_inv_units(x: int, f: int) -> tuple[int, int]:
    """(units, error bound in units) for atan(1/x) * 2^f.

    Alternating series; each iteratively floored quotient contributes
    less than 3 units of error, the tail is below the first omitted term.
    """
    xsq = x * x
    cur = (1 << f) // x
    total = 0
    k = 0
    err = 4
    while cur:
        term = cur // (2 * k + 1)
        total += -term if k & 1 else term
        err += 3
        cur //= xsq
        k += 1
    return total, err


def _pi_units(f: int) -> tuple[int, int]:
    """pi * 2^f as (units, error units), cached per scale."""
    cached = _PI_CACHE.get(f)
    if cached is not None:
        return cached
    g = f + 40
    a5, e5 = _atan_inv_units(5, g)
    a239, e239 = _atan_inv_units(239, g)
    units = 16 * a5 - 4 * a239
    err = 16 * e5 + 4 * e239
    m, round_err = _round_shift(units, 40)
    r = _ceil_shift(err, 40) + round_err + 1
    _PI_CACHE[f] = (m, r)
    return m, r


def const_pi(ctx: PrecCtx) -> Ball:
    """Certified enclosure of pi at the context precision."""
    m, r = _pi_units(ctx.bits)
    return Ball(m, r, ctx.bits)


def _pi_ball(f: int) -> Ball:
    m, r = _pi_units(f)
    return Ball(m, r, f)


def _const_e(f: int) -> Ball:
    cached = _E_CACHE.get(f)
    if cached is not None:
        return cached
    val = exp(Ball.one(f))
    _E_CACHE[f] = val
    return val


def _ln2_ball(f: int) -> Ball:
    cached = _LN2_CACHE.get(f)
    if cached is not None:
        return cached
    third = Ball.from_fraction(Fraction(1, 3), f + 16)
    val = (_atanh_series(third) * 2).rescale(f)
    _LN2_CACHE[f] = val
    return val


# ---------------------------------------------------------------------------
# exponential, logarithm, trigonometry


def _exp_series(s: Ball) -> Ball:
    """exp of a ball with sup|s| <= 2^-8; truncation folded into the radius."""
    f = s.f
    acc = Ball.one(f)
    t = acc
    for i in range(1, 8 * f + 64):
        t = (t * s).div_int(i)
        acc = acc + t
        if abs(t.m) + t.r <= 2:
            break
    # remaining terms fall at least geometrically with ratio sup|s| <= 2^-8
    tail = _ceil_div(abs(t.m) + t.r, 128) + 1
    return Ball(acc.m, acc.r + tail, f)


def exp(x: Ball, ctx: PrecCtx | None = None) -> Ball:
    f = ctx.bits if ctx is not None else x.f
    # e^x < 2^-(f+2) once x <= -(f+2): return the certified sliver [0, 2^-f]
    if x.m + x.r <= -((f + 2) << x.f):
        return Ball(1, 1, f + 1)
    fw = f + 48
    xw = x.rescale(fw)
    mag = (abs(xw.m) + xw.r) >> fw
    j = mag.bit_length() + 8
    y = _exp_series(Ball(xw.m, xw.r, fw + j))
    for _ in range(j):
        y = y * y
    return y.rescale(f)


def _atanh_series(u: Ball) -> Ball:
    """atanh of a ball with sup|u| <= 0.4 via the odd series."""
    acc = u
    t = u
    u2 = u * u
    f = u.f
    for i in range(1, 8 * f + 64):
        t = t * u2
        term = t.div_int(2 * i + 1)
        acc = acc + term
        if abs(term.m) + term.r <= 2:
            break
    # ratio of successive terms <= sup(u)^2 <= 0.16: tail < term / 4
    tail = _ceil_div(abs(term.m) + term.r, 4) + 1
    return Ball(acc.m, acc.r + tail, f)


def log(x: Ball, ctx: PrecCtx | None = None) -> Ball:
    f = ctx.bits if ctx is not None else x.f
    fw = f + 48
    a = x.rescale(fw)
    if not a.is_strictly_positive():
        raise DomainError("log requires a strictly positive enclosure")
    e = a.m.bit_length() - fw - 1  # x / 2^e lands in [1, 2)
    w = Ball(a.m, a.r, fw + e)
    u = (w - 1) / (w + 1)
    if 20 * (abs(u.m) + u.r) > 8 << u.f:  # sup|u| > 0.4: enclosure too wide
        raise DomainError("log input enclosure is too wide")
    ln_w = _atanh_series(u) * 2
    return (ln_w + _ln2_ball(fw) * e).rescale(f)


def _cos_sin_series(s: Ball) -> tuple[Ball, Ball]:
    """(cos s, sin s) for sup|s| <= 0.9; geometric tail bound."""
    f = s.f
    s2 = s * s
    acc = Ball.one(f)
    t = acc
    for i in range(1, 8 * f + 64):
        t = (t * s2).div_int(2 * i - 1).div_int(2 * i)
        acc = acc + t if i % 2 == 0 else acc - t
        if abs(t.m) + t.r <= 2:
            break
    # successive term ratio <= 0.81/2 < 1/2: tail <= last term
    c = Ball(acc.m, acc.r + abs(t.m) + t.r + 1, f)
    acc = s
    t = s
    for i in range(1, 8 * f + 64):
        t = (t * s2).div_int(2 * i).div_int(2 * i + 1)
        acc = acc + t if i % 2 == 0 else acc - t
        if abs(t.m) + t.r <= 2:
            break
    sn = Ball(acc.m, acc.r + abs(t.m) + t.r + 1, f)
    return c, sn


def _trig_reduce(x: Ball, f: int) -> tuple[int, Ball]:
    """Return (k mod 4, s) with x = k*pi/2 + s and sup|s| <= 0.9.

    The pi enclosure is escalated past the argument's magnitude so the
    cancellation in x - k*pi/2 stays certified for arguments up to ~1e6.
    """
    mag_bits = ((abs(x.m) + x.r) >> x.f).bit_length()
    fw = f + 64 + mag_bits
    xw = x.rescale(fw)
    halfpi = _pi_ball(fw).half()
    k, _ = _round_div(2 * xw.m, halfpi.m)
    for _ in range(4):
        s = xw - halfpi * k
        if 10 * (abs(s.m) + s.r) <= 9 << s.f:
            return k % 4, s
        k += 1 if s.m > 0 else -1
    raise DomainError("trigonometric argument reduction failed")


def cos(x: Ball, ctx: PrecCtx | None = None) -> Ball:
    f = ctx.bits if ctx is not None else x.f
    k, s = _trig_reduce(x, f)
    c, sn = _cos_sin_series(s)
    return (c, -sn, -c, sn)[k].rescale(f)


def sin(x: Ball, ctx: PrecCtx | None = None) -> Ball:
    f = ctx.bits if ctx is not None else x.f
    k, s = _trig_reduce(x, f)
    c, sn = _cos_sin_series(s)
    return (sn, c, -sn, -c)[k].rescale(f)


# ---------------------------------------------------------------------------
# AGM


def agm(a: Ball, b: Ball, ctx: PrecCtx) -> Ball:
    """Arithmetic-geometric mean of two strictly positive enclosures."""
    f = ctx.bits
    fw = f + 32
    x, y = a.rescale(fw), b.rescale(fw)
    if not (x.is_strictly_positive() and y.is_strictly_positive()):
        raise DomainError("agm requires strictly positive enclosures")
    for _ in range(4 * fw.bit_length() + 64):
        x1 = (x + y).half().rescale(fw)
        y1 = sqrt(x * y).rescale(fw)
        x, y = x1, y1
        # after one step the true iterates bracket the limit: agm in [y, x]
        if abs(x.m - y.m) <= x.r + y.r + 4:
            return Ball.hull(x, y).rescale(f)
    raise DomainError("agm iteration failed to converge")


# ---------------------------------------------------------------------------
# gamma at rational arguments (Spouge's approximation, explicit remainder)


def gamma_rational(p, ctx: PrecCtx) -> Ball:
    """Certified enclosure of Gamma(p) for rational p in (0, 2].

    Spouge's approximation with its explicit remainder: the relative error
    of the truncated form is below a^{-1/2} (2 pi)^{-(a+1/2)} for real
    z >= 0, and that bound (inflated fourfold as a safety margin) is added
    to the radius, so the enclosure is certified rather than heuristic.
    Arguments below 1 go through Gamma(p) = Gamma(p+1)/p.
    """
    p = Fraction(p)
    if not 0 < p <= 2:
        raise UnsupportedArgument("gamma_rational requires 0 < p <= 2")
    f = ctx.bits
    key = (p, f)
    cached = _GAMMA_CACHE.get(key)
    if cached is not None:
        return cached
    if p == 1 or p == 2:
        return Ball.one(f)
    a = int(math.ceil((f + 40) / _LOG2_2PI))
    # headroom: cancellation inside the coefficient sum (~0.5a bits) plus
    # the magnitude swing of the e^-(z+a) prefactor (~1.45a bits)
    fw = f + (a + 1) // 2 + int(1.45 * a) + 64
    z = p - 1 if p >= 1 else p
    zb = Ball.from_fraction(z, fw)
    e1 = _const_e(fw)
    epow = ipow(e1, a - 1)
    two_pi = _pi_ball(fw) * 2
    total = sqrt(two_pi)
    fact = 1
    for k in range(1, a):
        c = (epow * (a - k) ** k) / (sqrt(Ball.from_fraction(a - k, fw)) * fact)
        term = c / (zb + k)
        total = total + term if k % 2 == 1 else total - term
        epow = epow / e1
        fact *= k
    za = zb + a
    prefac = exp(Ball.from_fraction(z + Fraction(1, 2), fw) * log(za) - za)
    g = prefac * total
    eps = pow_rational(two_pi, Fraction(-(2 * a + 1), 2)) / sqrt(
        Ball.from_fraction(a, fw)
    )
    rem = _ceil_shift(4 * eps.sup_units() * g.sup_units(), fw) + 1
    g = Ball(g.m, g.r + rem, g.f)
    if p < 1:
        g = g / Ball.from_fraction(p, fw)
    g = g.rescale(f)
    _GAMMA_CACHE[key] = g
    return g


# ---------------------------------------------------------------------------
# spec-shaped dispatchers


def ball_arith(a: Ball, b, op: str, ctx: PrecCtx) -> Ball:
    """Dispatch {add, sub, mul, div, pow_rational} at the context precision.

    For pow_rational, ``b`` is the rational exponent.
    """
    f = ctx.bits
    if op == "add":
        return (a + b).rescale(f)
    if op == "sub":
        return (a - b).rescale(f)
    if op == "mul":
        return (a * b).rescale(f)
    if op == "div":
        return (a / b).rescale(f)
    if op == "pow_rational":
        return pow_rational(a, b, ctx)
    raise ValueError(f"unknown ball operation {op!r}")


def elementary(x: Ball, fn: str, ctx: PrecCtx, n: int = 2) -> Ball:
    """Dispatch {exp, log, sqrt, nth_root, cos, sin} at the context precision."""
    if fn == "exp":
        return exp(x, ctx)
    if fn == "log":
        return log(x, ctx)
    if fn == "sqrt":
        return sqrt(x, ctx)
    if fn == "nth_root":
        return nth_root(x, n, ctx)
    if fn == "cos":
        return cos(x, ctx)
    if fn == "sin":
        return sin(x, ctx)
    raise ValueError(f"unknown elementary function {fn!r}")


# ---------------------------------------------------------------------------
# decimal rendering and digit agreement (exact integer logic throughout)


def _log10_floor(n: int, f: int) -> tuple[int, bool]:
    """(floor(log10(n * 2^-f)), exact power of ten?) for n > 0."""
    est = int((n.bit_length() - f) * 0.30103) - 2
    while _cmp_pow10(n, f, est + 1) >= 0:
        est += 1
    while _cmp_pow10(n, f, est) < 0:
        est -= 1
    return est, _cmp_pow10(n, f, est) == 0


def _cmp_pow10(n: int, f: int, e: int) -> int:
    """Sign of n * 2^-f - 10^e."""
    if e >= 0:
        lhs, rhs = n, (10**e) << f
    else:
        lhs, rhs = n * 10**-e, 1 << f
    return (lhs > rhs) - (lhs < rhs)


def decimal_str(ball: Ball, sig: int) -> str:
    """First `sig` significant decimal digits of the midpoint."""
    m, f = ball.m, ball.f
    if m == 0:
        return "0"
    sign = "-" if m < 0 else ""
    n = abs(m)
    e10, _ = _log10_floor(n, f)
    shift = sig - 1 - e10
    if shift >= 0:
        scaled, _ = _round_shift(n * 10**shift, f)
    else:
        scaled, _ = _round_div(n, (10**-shift) << f)
    digits = str(scaled)
    if len(digits) > sig:  # rounding bumped 999... to 1000...
        digits = digits[:sig]
        e10 += 1
    digits = digits.ljust(sig, "0")
    if -4 <= e10 < 21:
        if e10 >= 0:
            whole = digits.ljust(e10 + 1, "0")  # pad when sig digits run out
            ip, fp = whole[: e10 + 1], whole[e10 + 1 :]
            return f"{sign}{ip}.{fp}" if fp else f"{sign}{ip}"
        return f"{sign}0.{'0' * (-e10 - 1)}{digits}"
    return f"{sign}{digits[0]}.{digits[1:]}e{e10:+d}"


def rad_exponent(ball: Ball) -> int | None:
    """Smallest integer e with radius <= 10^e; None for an exact ball."""
    if ball.r == 0:
        return None
    fl, exact = _log10_floor(ball.r, ball.f)
    return fl if exact else fl + 1


def rad_exponent_str(ball: Ball) -> str:
    e = rad_exponent(ball)
    return "0" if e is None else f"1e{e:+d}"


def agreement_digits(lhs: Ball, rhs: Ball, cap: int = 10**6) -> int:
    """floor(-log10(|lhs.mid - rhs.mid| + lhs.rad + rhs.rad)).

    Returns `cap` when the quantity is exactly zero; may be negative when
    the balls are farther than 1 apart.
    """
    f = max(lhs.f, rhs.f)
    a, b = lhs.rescale(f), rhs.rescale(f)
    x = abs(a.m - b.m) + a.r + b.r
    if x == 0:
        return cap
    fl, exact = _log10_floor(x, f)
    return min(cap, -fl if exact else -fl - 1)
