"""Septic-system tests: the recorded relations on a nome grid, certified
root solving, ordering search, and the completed evaluation."""

from dataclasses import replace
from fractions import Fraction as F

import pytest

from thetaval.errors import (
    BothRootsMatch,
    ComplexRootsDetected,
    DomainError,
    MultiplePermutationsMatch,
    NoPermutationMatches,
    NoRootMatches,
    RootsNotSeparable,
)
from thetaval.exact import CosPiRat, Int, Mul, PowRat, build_catalog, eval_expr, verify_identity
from thetaval.precision import Ball, PrecCtx, ipow, pow_rational
from thetaval.qseries import QPoint, phi, q_power_ball
from thetaval import lostnotebook
from thetaval.lostnotebook import (
    assign_roots,
    build_septic_state,
    complete_evaluation,
    compute_p,
    compute_uvw,
    cubic_roots,
    misprint_variant,
    ratio4_series_oracle,
    septic_pipeline,
    solve_ratio4,
    verify_quartic_relation,
)

CTX = PrecCtx(256)
Q7 = QPoint(1, F(1, 7))
GRID = [F(1, 10), F(1, 5), F(3, 10), F(2, 5)]


def cos_root(k: int, ctx=CTX) -> Ball:
    return eval_expr(PowRat(Mul(Int(2), CosPiRat(F(k, 7))), F(-2)), ctx)


class TestRelations:
    @pytest.mark.parametrize("q", GRID + [Q7])
    def test_p_equals_uvw(self, q):
        u, v, w = compute_uvw(q, CTX)
        assert compute_p(q, CTX).overlaps(u * v * w)

    @pytest.mark.parametrize("q", GRID + [Q7])
    def test_one_plus_uvw_quotient(self, q):
        u, v, w = compute_uvw(q, CTX)
        fw = 288
        wctx = PrecCtx(fw)
        lhs = Ball.one(fw) + u + v + w
        if isinstance(q, QPoint):
            rhs = phi(q.pow(F(1, 7)), wctx) / phi(q.pow(7), wctx)
        else:
            rhs = phi(q_power_ball(q, F(1, 7), fw), wctx) / phi(q**7, wctx)
        assert lhs.overlaps(rhs)

    @pytest.mark.parametrize("q", GRID + [Q7, F(1, 4), F(1, 2)])
    def test_quartic_relation(self, q):
        assert verify_quartic_relation(q, CTX).contains_zero()

    def test_negative_nome_rejected(self):
        with pytest.raises(DomainError):
            compute_uvw(QPoint(-1, F(4)), CTX)

    def test_u_at_pivot_matches_cosine_form(self):
        u, _, _ = compute_uvw(Q7, CTX)
        expr = PowRat(
            Mul(
                Int(2),
                PowRat(CosPiRat(F(3, 7)), F(2)),
            ),
            F(-1),
        )
        target = pow_rational(
            eval_expr(CosPiRat(F(2, 7)), CTX) * eval_expr(expr, CTX), F(2, 7)
        )
        assert u.overlaps(target)

    def test_small_q_leading_orders(self):
        u, _, _ = compute_uvw(F(1, 10**6), CTX)
        lead = q_power_ball(F(1, 10**6), F(1, 7), 288) * 2
        assert abs((u / lead).to_float() - 1) < 0.01
        p = compute_p(F(1, 10**4), CTX)
        assert abs((p / Ball.from_fraction(F(8, 10**8), 256)).to_float() - 1) < 0.001


class TestQuadratic:
    def test_pivot_ratio_is_seven(self):
        p = compute_p(Q7, CTX)
        root, branch = solve_ratio4(p, Q7, CTX)
        assert root.contains(7) and branch == "plus"

    @pytest.mark.parametrize("q", GRID)
    def test_branch_matches_series_oracle(self, q):
        p = compute_p(q, CTX)
        root, _ = solve_ratio4(p, q, CTX)
        assert root.overlaps(ratio4_series_oracle(q, CTX))

    def test_degenerate_p_zero(self):
        root, branch = solve_ratio4(Ball(0, 0, 256), F(1, 100), CTX)
        assert root.contains(1) and branch == "double"

    def test_no_root_matches(self):
        with pytest.raises(NoRootMatches):
            solve_ratio4(Ball.from_fraction(5, 256), F(3, 10), CTX)

    def test_both_roots_match_guard(self, monkeypatch):
        # an oracle too wide to separate the roots must refuse to choose
        wide = Ball(Ball.one(256).m, 1 << 260, 256)
        monkeypatch.setattr(lostnotebook, "ratio4_series_oracle", lambda q, ctx: wide)
        p = compute_p(F(3, 10), CTX)
        with pytest.raises(BothRootsMatch):
            solve_ratio4(p, F(3, 10), CTX)


class TestCubic:
    def test_pivot_coefficients(self):
        state = build_septic_state(Q7, CTX)
        c2, c1, c0 = state.cubic
        assert c2.contains(-6) and c1.contains(5) and c0.contains(-1)
        assert state.branch == "plus"

    def test_roots_match_cosine_forms_and_vieta(self):
        state = build_septic_state(Q7, CTX)
        roots = cubic_roots(state, CTX)
        for k, root in zip((1, 2, 3), roots):
            assert root.overlaps(cos_root(k))
        c2, c1, c0 = state.cubic
        r1, r2, r3 = roots
        assert (r1 + r2 + r3).overlaps(-c2)
        assert (r1 * r2 + r1 * r3 + r2 * r3).overlaps(c1)
        assert (r1 * r2 * r3).overlaps(-c0)

    def test_residual_at_each_root(self):
        state = build_septic_state(Q7, CTX)
        c2, c1, c0 = state.cubic
        for root in cubic_roots(state, CTX):
            residual = ((root + c2) * root + c1) * root + c0
            assert residual.contains_zero()

    def test_not_separable_with_wide_coefficients(self):
        state = build_septic_state(F(3, 10), CTX)
        inflate = lambda b: Ball(b.m, 1 << (b.f - 2), b.f)
        bad = replace(state, cubic=tuple(inflate(c) for c in state.cubic))
        with pytest.raises(RootsNotSeparable):
            cubic_roots(bad, CTX)

    def test_complex_roots_detected(self):
        state = build_septic_state(F(3, 10), CTX)
        one = Ball.one(256)
        with pytest.raises(ComplexRootsDetected):
            cubic_roots(replace(state, cubic=(Ball(0, 0, 256), one, one)), CTX)


class TestAssignment:
    def test_pivot_assignment_is_papers_order(self):
        state = build_septic_state(Q7, CTX)
        roots = cubic_roots(state, CTX)
        asn = assign_roots(state, roots, CTX)
        assert asn.alpha.overlaps(cos_root(3))
        assert asn.beta.overlaps(cos_root(2))
        assert asn.gamma.overlaps(cos_root(1))
        # u^7 = alpha^2 p / beta as a definitional rearrangement
        u7 = ipow(state.u, 7)
        assert u7.overlaps(ipow(asn.alpha, 2) * state.p / asn.beta)

    @pytest.mark.parametrize("q", GRID)
    def test_unique_assignment_on_grid(self, q):
        state, roots, asn = septic_pipeline(q, CTX)
        uc = pow_rational(ipow(asn.alpha, 2) * state.p / asn.beta, F(1, 7))
        assert uc.overlaps(state.u)

    def test_multiple_permutations_guard(self):
        state = build_septic_state(F(3, 10), CTX)
        roots = cubic_roots(state, CTX)
        wide = lambda b: Ball(b.m, 1 << b.f, b.f)
        bad = replace(state, u=wide(state.u), v=wide(state.v), w=wide(state.w))
        with pytest.raises(MultiplePermutationsMatch):
            assign_roots(bad, roots, CTX)

    def test_no_permutation_matches(self):
        state = build_septic_state(F(3, 10), CTX)
        fake = tuple(Ball.from_fraction(k, 256) for k in (2, 3, 4))
        with pytest.raises(NoPermutationMatches):
            assign_roots(state, fake, CTX)


class TestCompletion:
    def test_complete_evaluation(self):
        result = complete_evaluation(PrecCtx(512))
        catalog = build_catalog()
        assert result.identity.rhs == catalog.get("ln7").rhs
        assert result.identity.lhs == catalog.get("ln7").lhs
        assert result.report.status == "verified"
        assert result.report.agreement_digits >= 100
        assert result.cos_pairs == ((1, 2), (2, 3), (3, 1))
        assert result.state.branch == "plus"

    def test_lhs_series_overlaps_closed_form(self):
        from thetaval.qseries import phi_series

        ctx = PrecCtx(512)
        result = complete_evaluation(ctx)
        lhs = phi_series(QPoint(1, F(343)), ctx) / phi_series(QPoint(1, F(7)), ctx)
        assert lhs.overlaps(eval_expr(result.identity.rhs, ctx))

    def test_misprint_fails(self):
        result = complete_evaluation(PrecCtx(512))
        rep = verify_identity(misprint_variant(result.identity), PrecCtx(512))
        assert rep.status == "unverified" and rep.agreement_digits < 5

    def test_misprint_requires_expected_shape(self):
        catalog = build_catalog()
        with pytest.raises(ValueError):
            misprint_variant(catalog.get("r3"))
