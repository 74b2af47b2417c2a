"""Singularity location, discriminant structure, and Puiseux machinery."""
from fractions import Fraction

import mpmath
import pytest

from isingmaps.errors import DegenerateBranch, FactorizationMismatch
from isingmaps.exactalg import UniPoly, sturm_count
from isingmaps.series import IsingParams, lagrangian_numer_denom
from isingmaps.singular import (
    SingularityReport,
    char_factors,
    characteristic_root_polynomial,
    discriminant_in_z,
    dominant_exponent,
    newton_polygon_expand,
    p1_p2_p3,
    radius_numeric,
    rho_closed_form,
    s_at_rho_closed_form,
    _root_interval_bound,
)


def params(nu, c=1):
    return IsingParams(nu=nu, c=c)


class TestCharFactors:
    def test_q2_degree_eight(self):
        cf = char_factors(params(2))
        assert cf.q2.degree() == 8
        assert cf.q1.degree() == 2

    def test_q1_is_difference_of_squares(self):
        nu, c = Fraction(3), Fraction(19, 20)
        cf = char_factors(params(nu, c))
        gamma = 1 - nu ** 2
        lin_m = UniPoly([Fraction(1), -3 * c * gamma])
        lin_p = UniPoly([Fraction(1), 3 * c * gamma])
        assert cf.q1 == lin_m * lin_p

    def test_nu_one_reduces_to_n_plus_s_nprime(self):
        p = params(1, Fraction(21, 20))
        cf = char_factors(p)
        n_poly, d_poly = lagrangian_numer_denom(p, symbolic=False)
        assert d_poly == UniPoly([Fraction(1)])
        expected = n_poly + UniPoly.variable() * n_poly.derivative()
        assert cf.q2 == expected

    def test_multiply_back_check_runs(self):
        # construction includes the FactorizationMismatch self-check
        for nu in (Fraction(1, 2), 2, 4, 7):
            char_factors(params(nu))


class TestClosedForms:
    def test_branches_agree_exactly_at_four(self):
        low = 2 * (1 + 2 * 2) / (Fraction(9) * (1 + 2) ** 2 * (1 + 4) ** 2)
        high = (3 * Fraction(4) ** 2 - 8) / (36 * (Fraction(4) ** 2 - 1) ** 2)
        assert rho_closed_form(Fraction(4)) == low == high == Fraction(2, 405)
        assert s_at_rho_closed_form(Fraction(4)) == Fraction(1, 45)

    def test_square_nu_values_exact(self):
        assert rho_closed_form(Fraction(1, 4)) == Fraction(256, 2025)
        assert s_at_rho_closed_form(Fraction(1, 4)) == Fraction(8, 45)
        assert rho_closed_form(Fraction(5)) == Fraction(67, 20736)
        assert s_at_rho_closed_form(Fraction(5)) == Fraction(1, 72)
        assert rho_closed_form(Fraction(9)) == Fraction(47, 46080)
        assert s_at_rho_closed_form(Fraction(9)) == Fraction(1, 240)

    def test_irrational_nu_returns_high_precision_real(self):
        val = rho_closed_form(Fraction(2), precision_bits=160)
        assert isinstance(val, mpmath.mpf)
        with mpmath.workprec(160):
            r = mpmath.sqrt(mpmath.mpf(2))
            direct = 2 * (1 + 2 * r) / (9 * (1 + r) ** 2 * mpmath.mpf(9))
            assert abs(val - direct) < mpmath.mpf(2) ** -140

    def test_decreasing_in_nu(self):
        grid = [Fraction(1, 4), Fraction(9, 4), Fraction(4), Fraction(5), Fraction(9)]
        vals = [rho_closed_form(nu) for nu in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_rejects_nonpositive_nu(self):
        with pytest.raises(ValueError):
            rho_closed_form(Fraction(0))


class TestRepeatedFactorOfN:
    def test_u_squared_divides_n_at_c_one(self):
        for nu in (2, 5, Fraction(7, 2), Fraction(1, 3)):
            nu = Fraction(nu)
            n_poly, _ = lagrangian_numer_denom(params(nu), symbolic=False)
            gamma = 1 - nu ** 2
            u = UniPoly([Fraction(1), 3 * gamma])
            quotient = n_poly.exact_div(u * u)  # NonZeroRemainder on failure
            assert quotient.degree() == 4

    def test_no_repeated_factor_off_c_one(self):
        p = params(2, Fraction(19, 20))
        c_sf_deg = characteristic_root_polynomial(p).degree()
        assert c_sf_deg == 8  # full Q2 survives squarefree reduction


class TestRadiusNumeric:
    def test_exact_endpoint_cases(self):
        for nu, rho, s_star in [
            (4, Fraction(2, 405), Fraction(1, 45)),
            (5, Fraction(67, 20736), Fraction(1, 72)),
            (9, Fraction(47, 46080), Fraction(1, 240)),
        ]:
            rep = radius_numeric(params(nu), with_exponent=False,
                                 scan_uniqueness=False)
            assert rep.exact
            assert rep.rho == rho
            assert rep.mu == rho
            assert rep.s_at_rho == s_star

    def test_certified_interval_matches_closed_form(self):
        tol = Fraction(1, 10 ** 12)
        for nu in (Fraction(1, 4), 2, 5, 9):
            rep = radius_numeric(params(nu), tol=tol, with_exponent=False,
                                 scan_uniqueness=False)
            closed = rho_closed_form(Fraction(nu), precision_bits=192)
            lo, hi = rep.rho_interval
            assert hi - lo <= tol
            if isinstance(closed, Fraction):
                assert lo <= closed <= hi
            else:
                with mpmath.workprec(192):
                    lo_x = mpmath.mpf(lo.numerator) / lo.denominator
                    hi_x = mpmath.mpf(hi.numerator) / hi.denominator
                    assert lo_x - 10 ** -15 <= closed <= hi_x + 10 ** -15

    def test_mu_is_c_times_rho(self):
        rep = radius_numeric(params(2, Fraction(19, 20)), with_exponent=False,
                             scan_uniqueness=False)
        assert rep.mu == Fraction(19, 20) * rep.rho
        assert rep.mu_interval[0] == Fraction(19, 20) * rep.rho_interval[0]

    def test_far_field_requires_flag(self):
        with pytest.raises(ValueError):
            radius_numeric(params(2, 2), with_exponent=False)
        rep = radius_numeric(params(2, Fraction(3, 2)), allow_far_field=True,
                             with_exponent=False, scan_uniqueness=False)
        assert any("validated" in w for w in rep.warnings)
        assert rep.rho > 0

    def test_nu_one_uses_fallback_bound(self):
        rep = radius_numeric(params(1, Fraction(9, 10)), with_exponent=False,
                             scan_uniqueness=False)
        # at nu=1: rho = 1/(12(c^2+1)) from the linear characteristic factor
        expected = Fraction(1) / (12 * (Fraction(9, 10) ** 2 + 1))
        lo, hi = rep.rho_interval
        assert lo <= expected <= hi

    def test_uniqueness_scan_sets_flag(self):
        rep = radius_numeric(params(2), with_exponent=False)
        assert rep.uniqueness_checked
        assert isinstance(rep, SingularityReport)


class TestSturmGrid:
    def test_exactly_one_characteristic_root(self):
        for nu in (Fraction(1, 2), Fraction(2), Fraction(5)):
            for c in (Fraction(9, 10), Fraction(19, 20), Fraction(1)):
                p = params(nu, c)
                q = characteristic_root_polynomial(p)
                bound = _root_interval_bound(p)
                assert sturm_count(q, 0, bound) == 1, (nu, c)


class TestDiscriminant:
    def test_divisible_by_p1_cubed_p2_p3(self):
        for nu in (2, 5):
            disc = discriminant_in_z(params(nu))
            p1, p2, p3 = p1_p2_p3(Fraction(nu))
            q = disc
            for factor in (p1, p1, p1, p2, p3):
                q = q.exact_div(factor)  # raises NonZeroRemainder on failure
            assert q.degree() <= 1

    def test_linear_factor_vanishes_at_rho_for_nu_ge_four(self):
        p1, _, _ = p1_p2_p3(Fraction(5))
        assert p1.eval_scalar(Fraction(67, 20736)) == 0

    def test_quadratic_factor_vanishes_at_rho_below_four(self):
        _, p2, _ = p1_p2_p3(Fraction(1, 4))
        assert p2.eval_scalar(Fraction(256, 2025)) == 0

    def test_both_factors_share_rho_at_four(self):
        p1, p2, _ = p1_p2_p3(Fraction(4))
        assert p1.eval_scalar(Fraction(2, 405)) == 0
        assert p2.eval_scalar(Fraction(2, 405)) == 0

    def test_p3_is_p2_with_nu_negated(self):
        _, p2_neg, _ = p1_p2_p3(Fraction(-3))
        _, _, p3 = p1_p2_p3(Fraction(3))
        assert p2_neg == p3

    def test_nonzero_off_c_one(self):
        disc = discriminant_in_z(params(2, Fraction(19, 20)))
        assert disc.degree() >= 7


class TestNewtonPolygon:
    def test_square_root_branch_pair(self):
        exps = newton_polygon_expand({(2, 0): Fraction(1), (0, 1): Fraction(-1)})
        assert len(exps) == 2
        assert sorted(e.terms[0][0] for e in exps) == [Fraction(-1), Fraction(1)]
        assert all(e.leading_exponent() == Fraction(1, 2) for e in exps)
        assert all(e.ramification == 2 for e in exps)
        assert all(e.exact for e in exps)

    def test_cube_root_branch(self):
        exps = newton_polygon_expand({(3, 0): Fraction(1), (0, 1): Fraction(-1)})
        assert any(e.leading_exponent() == Fraction(1, 3) for e in exps)
        for e in exps:
            assert e.leading_exponent() == Fraction(1, 3)
            assert e.ramification == 3

    def test_three_halves_exponent(self):
        exps = newton_polygon_expand({(2, 0): Fraction(1), (0, 3): Fraction(-1)})
        assert all(e.leading_exponent() == Fraction(3, 2) for e in exps)

    def test_transverse_lines_give_integer_branches(self):
        # (Y - Z)(Y - 2Z) = Y^2 - 3ZY + 2Z^2
        exps = newton_polygon_expand({
            (2, 0): Fraction(1), (1, 1): Fraction(-3), (0, 2): Fraction(2),
        })
        leads = sorted(e.terms[0][0] for e in exps)
        assert leads == [Fraction(1), Fraction(2)]
        assert all(e.leading_exponent() == 1 for e in exps)
        assert all(e.exact for e in exps)

    def test_y_factor_gives_zero_branch(self):
        # Y(Y - Z): the zero branch is reported with no terms
        exps = newton_polygon_expand({(2, 0): Fraction(1), (1, 1): Fraction(-1)})
        term_lists = sorted(e.terms for e in exps)
        assert term_lists[0] == ()
        assert term_lists[1] == ((Fraction(1), Fraction(1)),)

    def test_no_y_dependence_raises(self):
        with pytest.raises(DegenerateBranch):
            newton_polygon_expand({(0, 1): Fraction(1), (0, 2): Fraction(3)})

    def test_nonvanishing_origin_raises(self):
        with pytest.raises(DegenerateBranch):
            newton_polygon_expand({(0, 0): Fraction(1), (1, 1): Fraction(1)})

    def test_numeric_coefficients(self):
        with mpmath.workprec(128):
            exps = newton_polygon_expand(
                {(2, 0): mpmath.mpf(1), (0, 1): mpmath.mpf(-1)},
                precision_bits=128,
            )
        assert all(e.leading_exponent() == Fraction(1, 2) for e in exps)

    def test_second_term_of_smooth_branch(self):
        # Y = Z + Z^2 + ... solves Y - Z - Z Y = 0
        exps = newton_polygon_expand(
            {(1, 0): Fraction(1), (0, 1): Fraction(-1), (1, 1): Fraction(-1)},
            max_terms=2,
        )
        assert len(exps) == 1
        assert exps[0].terms[0] == (Fraction(1), Fraction(1))
        assert exps[0].terms[1] == (Fraction(1), Fraction(2))


class TestDominantExponent:
    def test_cube_root_at_critical_point(self):
        assert dominant_exponent(params(4)) == Fraction(1, 3)

    def test_square_root_at_rational_endpoint(self):
        assert dominant_exponent(params(5)) == Fraction(1, 2)
        assert dominant_exponent(params(9)) == Fraction(1, 2)

    def test_square_root_on_numeric_path(self):
        assert dominant_exponent(params(2)) == Fraction(1, 2)

    def test_square_root_off_c_one(self):
        assert dominant_exponent(params(4, Fraction(21, 20))) == Fraction(1, 2)
