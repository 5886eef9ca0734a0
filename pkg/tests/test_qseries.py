"""Theta-function tests: products vs series, triple product, tail bounds.

Oracles: direct finite products at doubled precision, the defining
series routes, and exact special-case identities.
"""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from thetaval.errors import DomainError, NotConvergent
from thetaval.precision import Ball, PrecCtx, decimal_str, gamma_rational, ipow, pow_rational
from thetaval.precision import const_pi
from thetaval.qseries import (
    QPoint,
    SeriesTail,
    chi,
    f_neg,
    f_neg_series,
    phi,
    phi_series,
    pochhammer_inf,
    psi,
    psi_series,
    theta_f,
)

CTX = PrecCtx(256)
E_PI = QPoint(1, F(1))
SAMPLE_QS = [F(1, 20), F(-1, 20), F(3, 10), F(-3, 10), F(3, 5), F(-3, 5), E_PI, QPoint(1, F(7))]


def bf(x, f=256):
    return Ball.from_fraction(F(x), f)


class TestQPoint:
    def test_ball_value(self):
        import mpmath as mp

        mp.mp.dps = 60
        q = QPoint(1, F(7)).to_ball(CTX)
        ref = F(str(mp.nstr(mp.exp(-mp.pi * mp.sqrt(7)), 45, strip_zeros=False)))
        assert abs(q.mid - ref) < F(1, 10**42)

    def test_exact_power_bookkeeping(self):
        q = QPoint(1, F(1, 7))
        assert q.pow(7) == QPoint(1, F(7))
        assert q.pow(F(1, 7)) == QPoint(1, F(1, 343))
        assert QPoint(-1, F(4)).pow(2) == QPoint(1, F(16))
        assert QPoint(-1, F(4)).pow(3) == QPoint(-1, F(36))

    def test_negative_sign_rejects_fractional_powers(self):
        with pytest.raises(DomainError):
            QPoint(-1, F(4)).pow(F(1, 7))

    def test_validation(self):
        with pytest.raises(DomainError):
            QPoint(2, F(1))
        with pytest.raises(DomainError):
            QPoint(1, F(-3))

    def test_magnitude_below_one(self):
        assert QPoint(1, F(1, 1000)).to_ball(CTX).mag_lt_one()


class TestPochhammer:
    def test_zero_first_argument(self):
        assert pochhammer_inf(Ball(0, 0, 256), bf(F(1, 2)), CTX).contains(1)

    def test_zero_q_single_factor(self):
        val = pochhammer_inf(bf(F(1, 3)), Ball(0, 0, 256), CTX)
        assert val.contains(F(2, 3))

    def test_euler_product_at_tenth(self):
        # oracle: direct 200-factor product at doubled precision
        f = 512
        q = Ball.from_fraction(F(1, 10), f)
        prod = Ball.one(f)
        aq = q
        for _ in range(200):
            prod = prod * (Ball.one(f) - aq)
            aq = aq * q
        val = pochhammer_inf(bf(F(1, 10)), bf(F(1, 10)), CTX)
        assert abs(val.mid - prod.mid) < F(1, 10**70)
        assert decimal_str(val, 40) == "0.8900100999989990000001000099999999899999"

    def test_divergent_q_rejected(self):
        with pytest.raises(NotConvergent):
            pochhammer_inf(bf(F(1, 2)), bf(F(3, 2)), CTX)


class TestThetaF:
    @given(
        a=st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=200),
        b=st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=200),
    )
    @settings(max_examples=20, deadline=None)
    def test_symmetry_and_triple_product(self, a, b):
        if abs(a * b) > F(4, 5):
            return
        ctx = PrecCtx(128)
        ba, bb = Ball.from_fraction(a, 128), Ball.from_fraction(b, 128)
        series = theta_f(ba, bb, ctx)
        assert series.overlaps(theta_f(bb, ba, ctx))
        ab = ba * bb
        product = (
            pochhammer_inf(-ba, ab, ctx)
            * pochhammer_inf(-bb, ab, ctx)
            * pochhammer_inf(ab, ab, ctx)
        )
        assert series.overlaps(product)

    def test_value_against_frozen_digits(self):
        val = theta_f(bf(F(1, 5)), bf(F(3, 10)), CTX)
        assert decimal_str(val, 30) == "1.50780756045256486282021285670"

    def test_nonconvergent(self):
        with pytest.raises(NotConvergent):
            theta_f(bf(F(3, 2)), bf(F(1)), CTX)


class TestPhi:
    def test_at_zero(self):
        assert phi(Ball(0, 0, 256), CTX).contains(1)
        assert phi_series(Ball(0, 0, 256), CTX).contains(1)

    def test_classical_point(self):
        val = phi(E_PI, CTX)
        assert decimal_str(val, 30) == "1.08643481121330801457531612151"
        rhs = pow_rational(const_pi(CTX), F(1, 4)) / gamma_rational(F(3, 4), CTX)
        assert val.overlaps(rhs)

    def test_change_of_sign_fourth_power(self):
        ratio = phi(QPoint(-1, F(1)), CTX) / phi(E_PI, CTX)
        assert ipow(ratio, 4).contains(F(1, 2))

    def test_phi_equals_theta_f_q_q(self):
        q = bf(F(1, 10))
        assert phi(q, CTX).overlaps(theta_f(q, q, CTX))

    @pytest.mark.parametrize("q", SAMPLE_QS)
    def test_route_agreement(self, q):
        assert phi(q, CTX).overlaps(phi_series(q, CTX))

    def test_tail_soundness(self):
        val1, tail1 = phi_series(bf(F(3, 10)), CTX, with_tail=True)
        val2, tail2 = phi_series(
            bf(F(3, 10)), CTX, min_terms=tail1.terms_used + 10, with_tail=True
        )
        assert isinstance(tail1, SeriesTail) and tail1.tail_bound >= 0
        assert tail2.terms_used >= tail1.terms_used + 10
        assert val1.encloses(val2)


class TestPsi:
    def test_at_zero(self):
        assert psi(Ball(0, 0, 256), CTX).contains(1)

    @pytest.mark.parametrize("q", SAMPLE_QS)
    def test_route_agreement(self, q):
        assert psi(q, CTX).overlaps(psi_series(q, CTX))

    def test_psi_equals_theta_f_q_q3(self):
        q = bf(F(1, 5))
        assert psi(q, CTX).overlaps(theta_f(q, ipow(q, 3), CTX))

    def test_tail_soundness(self):
        v1, t1 = psi_series(bf(F(2, 5)), CTX, with_tail=True)
        v2, _ = psi_series(bf(F(2, 5)), CTX, min_terms=t1.terms_used + 10, with_tail=True)
        assert v1.encloses(v2)


class TestFNeg:
    def test_at_zero(self):
        assert f_neg(Ball(0, 0, 256), CTX).contains(1)

    def test_pentagonal_vs_product(self):
        val = f_neg(bf(F(3, 10)), CTX)
        assert val.overlaps(f_neg_series(bf(F(3, 10)), CTX))
        assert decimal_str(val, 30) == "0.612648154213256524117652074619"

    def test_equals_theta_f(self):
        q = bf(F(3, 20))
        assert f_neg(q, CTX).overlaps(theta_f(-q, -(q * q), CTX))

    @pytest.mark.parametrize("q", SAMPLE_QS)
    def test_route_agreement(self, q):
        assert f_neg(q, CTX).overlaps(f_neg_series(q, CTX))

    def test_tail_soundness(self):
        v1, t1 = f_neg_series(bf(F(1, 2)), CTX, with_tail=True)
        v2, _ = f_neg_series(bf(F(1, 2)), CTX, min_terms=t1.terms_used + 10, with_tail=True)
        assert v1.encloses(v2)


class TestChi:
    def test_at_zero(self):
        assert chi(Ball(0, 0, 256), CTX).contains(1)

    def test_value_against_product_oracle(self):
        # oracle: direct 300-factor product of (1 + q^(2k+1)) at doubled precision
        f = 512
        q = Ball.from_fraction(F(1, 5), f)
        q2 = q * q
        prod = Ball.one(f)
        aq = q
        for _ in range(300):
            prod = prod * (Ball.one(f) + aq)
            aq = aq * q2
        val = chi(bf(F(1, 5)), CTX)
        assert abs(val.mid - prod.mid) < F(1, 10**70)
        assert decimal_str(val, 30) == "1.21000320516923341604637347905"

    def test_modular_representation_at_half(self):
        # chi(q) = 2^(1/6) (x(1-x)/q)^(-1/24) at x = 1/2, q = e^-pi
        f = 288
        x = Ball.from_fraction(F(1, 2), f)
        q = E_PI.to_ball(PrecCtx(f))
        rhs = pow_rational(Ball.from_fraction(2, f), F(1, 6)) * pow_rational(
            x * (Ball.one(f) - x) / q, F(-1, 24)
        )
        assert chi(E_PI, CTX).overlaps(rhs)
