import numpy as np
import pytest

import cyclenf as cn
from conftest import dict_max_diff, dmul, random_series2, series2_to_dict


def S(monomials, order):
    return cn.TruncatedSeries2.from_monomials(monomials, order)


class TestRingOps:
    def test_difference_of_squares(self):
        a = S([(0, 0, 1), (1, 0, 1)], 2)
        b = S([(0, 0, 1), (1, 0, -1)], 2)
        expected = S([(0, 0, 1), (2, 0, -1)], 2)
        assert cn.max_coeff_diff(a * b, expected) == 0.0

    def test_additive_identity(self):
        rng = np.random.default_rng(0)
        a = random_series2(rng, 4, 1.0, unit_constant=False)
        zero = cn.TruncatedSeries2.zeros(4)
        assert cn.max_coeff_diff(a + zero, a) == 0.0

    def test_square_against_convolution_oracle(self):
        # (1 + 0.1 S xi0)^2 at N=2, expected values from the dict-convolution
        a = S([(0, 0, 1.0), (1, 1, 0.1)], 2)
        oracle = dmul(series2_to_dict(a), series2_to_dict(a), 2)
        assert set(oracle) == {(0, 0), (1, 1), (2, 2)}
        assert abs(oracle[(0, 0)] - 1.0) == 0.0
        assert abs(oracle[(1, 1)] - 0.2) < 1e-15
        assert abs(oracle[(2, 2)] - 0.01) < 1e-15
        assert dict_max_diff(series2_to_dict(a * a), oracle) < 1e-15

    def test_mul_matches_oracle_random(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            a = random_series2(rng, 5, 1.0, unit_constant=False)
            b = random_series2(rng, 5, 1.0, unit_constant=False)
            oracle = dmul(series2_to_dict(a), series2_to_dict(b), 5)
            assert dict_max_diff(series2_to_dict(a * b), oracle) < 1e-12

    def test_ring_axioms_random(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            a = random_series2(rng, 6, 1.0, unit_constant=False)
            b = random_series2(rng, 6, 1.0, unit_constant=False)
            c = random_series2(rng, 6, 1.0, unit_constant=False)
            scale = max((a * (b * c)).max_abs(), 1.0)
            assert cn.max_coeff_diff(a * (b * c), (a * b) * c) / scale < 1e-12
            assert cn.max_coeff_diff(a * (b + c), a * b + a * c) / scale < 1e-12
            assert cn.max_coeff_diff(a + b, b + a) == 0.0

    def test_order_tracking_truncates_to_min(self):
        a = cn.TruncatedSeries2.constant(1.0, 5)
        b = cn.TruncatedSeries2.constant(1.0, 3)
        assert (a + b).order == 3
        assert (a * b).order == 3

    def test_kind_mismatch(self):
        a = cn.TruncatedSeries2.constant(1.0, 3)
        with pytest.raises(cn.SeriesKindError):
            a + cn.TruncatedSeries1.zeros(3)

    def test_no_nan_admitted(self):
        with pytest.raises(ValueError):
            cn.TruncatedSeries2(np.array([[np.nan, 0.0], [0.0, 0.0]]))


class TestInvertUnit:
    def test_identity(self):
        one = cn.TruncatedSeries2.constant(1.0, 4)
        assert cn.max_coeff_diff(cn.invert_unit(one), one) == 0.0

    def test_geometric_series(self):
        a = S([(0, 0, 1), (1, 0, 1)], 3)
        expected = S([(0, 0, 1), (1, 0, -1), (2, 0, 1), (3, 0, -1)], 3)
        assert cn.max_coeff_diff(cn.invert_unit(a), expected) < 1e-15

    def test_residual_check(self):
        a = S([(0, 0, 1), (1, 0, 0.1), (0, 1, 0.2)], 2)
        prod = a * cn.invert_unit(a)
        assert cn.max_coeff_diff(prod, cn.TruncatedSeries2.constant(1.0, 2)) < 1e-15

    def test_round_trip_pipeline_regime(self):
        # absolute 1e-11 in the regime the pipeline feeds (|c| <= 0.25)
        rng = np.random.default_rng(3)
        one = cn.TruncatedSeries2.constant(1.0, 16)
        for _ in range(5):
            a = random_series2(rng, 16, 0.25)
            assert cn.max_coeff_diff(a * cn.invert_unit(a), one) < 1e-11

    def test_round_trip_unit_coefficients_scale_relative(self):
        # |c| <= 1 at N = 16 conditions like eps * ||inverse||; see ledger
        rng = np.random.default_rng(4)
        for _ in range(3):
            a = random_series2(rng, 16, 1.0)
            inv = cn.invert_unit(a)
            residual = cn.max_coeff_diff(a * inv, cn.TruncatedSeries2.constant(1.0, 16))
            assert residual / max(1.0, inv.max_abs()) < 1e-11

    def test_not_a_unit(self):
        a = S([(1, 0, 1.0)], 2)
        with pytest.raises(cn.NotAUnitError):
            cn.invert_unit(a)


class TestLogExp:
    def test_log_one_is_zero(self):
        one = cn.TruncatedSeries2.constant(1.0, 4)
        assert cn.log_unit(one).max_abs() == 0.0

    def test_mercator(self):
        a = S([(0, 0, 1), (1, 0, 1)], 3)
        expected = S([(1, 0, 1), (2, 0, -0.5), (3, 0, 1.0 / 3.0)], 3)
        assert cn.max_coeff_diff(cn.log_unit(a), expected) < 1e-15

    def test_round_trip_small(self):
        a = S([(0, 0, 1), (1, 1, 0.1)], 6)
        assert cn.max_coeff_diff(cn.exp_series(cn.log_unit(a)), a) < 1e-12

    def test_round_trips_pipeline_regime(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            a = random_series2(rng, 16, 0.25)
            back = cn.exp_series(cn.log_unit(a))
            assert cn.max_coeff_diff(back, a) < 1e-11
            b = random_series2(rng, 8, 0.25, unit_constant=False)
            b.coeffs[0, 0] = 0.0
            assert cn.max_coeff_diff(cn.log_unit(cn.exp_series(b)), b) < 1e-11

    def test_round_trip_unit_coefficients_scale_relative(self):
        rng = np.random.default_rng(6)
        for _ in range(3):
            a = random_series2(rng, 16, 1.0)
            lg = cn.log_unit(a)
            residual = cn.max_coeff_diff(cn.exp_series(lg), a)
            assert residual / max(1.0, lg.max_abs()) < 1e-11

    def test_branch_error(self):
        a = cn.TruncatedSeries2.constant(2.0, 3)
        with pytest.raises(cn.BranchError):
            cn.log_unit(a)
        # but fine with the principal branch
        assert abs(cn.log_unit(a, branch_ball=None).coeff(0, 0) - np.log(2.0)) < 1e-15


class TestComposeChart:
    def test_q_y_under_v_plus(self, golden_t):
        # q(y) = y with y = w1/(t z): slice 1 holds (1/t) z^-1
        f = S([(0, 1, 1.0)], 2)
        out = cn.compose_chart(f, cn.ChartMap.v_plus(golden_t))
        assert abs(out.slices[1].mode(-1) - 1.0 / golden_t) < 1e-15
        assert out.slices[0].max_abs() == 0.0

    def test_p_x_under_v_plus(self):
        f = S([(1, 0, 1.0)], 2)
        out = cn.compose_chart(f, cn.ChartMap.v_plus(1.0))
        assert abs(out.slices[0].mode(1) - 1.0) == 0.0

    def test_p_x_under_v_minus(self, golden_t):
        # x = z w1 / t: slice 1 holds z / t
        f = S([(1, 0, 1.0)], 2)
        out = cn.compose_chart(f, cn.ChartMap.v_minus(golden_t))
        assert abs(out.slices[1].mode(1) - 1.0 / golden_t) < 1e-15

    def test_s_xi0_conversion(self):
        # S^2 xi0 -> slice 1, mode 1
        f = S([(2, 1, 3.0)], 3)
        out = cn.compose_chart(f, cn.ChartMap.from_s_xi0())
        assert abs(out.slices[1].mode(1) - 3.0) == 0.0

    def test_t_xiinf_conversion(self):
        # T^2 xiinf -> w1 = T xiinf: slice 1, mode 1-2 = -1
        f = S([(2, 1, 5.0)], 3)
        out = cn.compose_chart(f, cn.ChartMap.from_t_xiinf())
        assert abs(out.slices[1].mode(-1) - 5.0) == 0.0

    def test_linear_and_grading_preserved(self, golden_t):
        rng = np.random.default_rng(7)
        f = random_series2(rng, 4, 1.0, unit_constant=False)
        g = random_series2(rng, 4, 1.0, unit_constant=False)
        cm = cn.ChartMap.v_plus(golden_t)
        both = cn.compose_chart(f + g, cm)
        sep = cn.compose_chart(f, cm) + cn.compose_chart(g, cm)
        assert cn.max_coeff_diff(both, sep) < 1e-14
        # w-grading: monomial with y-degree b lands in slice b only
        mono = S([(2, 3, 1.0)], 4)
        out = cn.compose_chart(mono, cm)
        for nu in range(5):
            if nu != 3:
                assert out.slices[nu].max_abs() == 0.0

    def test_bandwidth_overflow(self):
        f = S([(4, 0, 1.0)], 4)
        with pytest.raises(cn.BandwidthOverflowError):
            cn.compose_chart(f, cn.ChartMap.v_plus(1.0), l_max=2)


class TestSupBound:
    def test_zero(self):
        lp = cn.LaurentPolynomial.zeros(2, (0.5, 2.0))
        assert cn.sup_bound(lp) == 0.0

    def test_monomial(self):
        lp = cn.LaurentPolynomial.from_modes({1: 1.0}, 1, (0.5, 2.0))
        assert cn.sup_bound(lp) == 2.0

    def test_triangle_oracle(self):
        lp = cn.LaurentPolynomial.from_modes({0: 1.0, 1: 1.0, -1: 1.0}, 1, (0.5, 2.0))
        assert cn.sup_bound(lp) == 5.0

    def test_subadditive(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            f = cn.LaurentPolynomial(
                rng.standard_normal(7) + 1j * rng.standard_normal(7), (0.5, 2.0)
            )
            g = cn.LaurentPolynomial(
                rng.standard_normal(7) + 1j * rng.standard_normal(7), (0.5, 2.0)
            )
            assert cn.sup_bound(f + g) <= cn.sup_bound(f) + cn.sup_bound(g) + 1e-12

    def test_bound_actually_bounds(self):
        rng = np.random.default_rng(9)
        lp = cn.LaurentPolynomial(
            rng.standard_normal(9) + 1j * rng.standard_normal(9), (0.5, 2.0)
        )
        bound = cn.sup_bound(lp)
        for _ in range(50):
            rho = np.exp(rng.uniform(np.log(0.5), np.log(2.0)))
            z = rho * np.exp(2j * np.pi * rng.random())
            assert abs(lp(z)) <= bound + 1e-12


class TestLaurentSeries2:
    def test_annulus_mismatch(self):
        a = cn.LaurentPolynomial.zeros(1, (0.5, 2.0))
        b = cn.LaurentPolynomial.zeros(1, (0.4, 2.0))
        with pytest.raises(cn.SeriesKindError):
            a + b

    def test_exp_requires_constant_slice0(self):
        ls = cn.LaurentSeries2.zeros(2, 1, (0.5, 2.0))
        ls.slices[0].set_mode(1, 1.0)
        with pytest.raises(cn.BranchError):
            cn.exp_laurent2(ls)

    def test_exp_matches_chartwise_exp(self, golden_t):
        # exp of a middle-chart form agrees with exp in the plus chart; the
        # input must be (the chart form of) a global function, i.e. its
        # middle slices carry modes |k| <= slice only: S-exp <= 2 * xi0-exp
        rng = np.random.default_rng(10)
        N = 5
        h = random_series2(rng, N, 0.1, unit_constant=False)
        h.coeffs[0, 0] = 0.0
        for a in range(N + 1):
            for b in range(N + 1):
                if a > 2 * b:
                    h.coeffs[a, b] = 0.0
        mid = cn.compose_chart(h, cn.ChartMap.from_s_xi0())
        exp_mid = cn.exp_laurent2(mid)
        # chart-side exp needs the 2N box: slice nu of a global function
        # reaches S-exponent 2 nu
        h_pad = cn.TruncatedSeries2.zeros(2 * N)
        h_pad.coeffs[: N + 1, : N + 1] = h.coeffs
        back = cn.compose_chart(cn.exp_series(h_pad), cn.ChartMap.from_s_xi0(),
                                l_max=2 * N)
        for nu in range(N + 1):
            for k in range(-nu, nu + 1):
                assert abs(exp_mid.slices[nu].mode(k) - back.slices[nu].mode(k)) < 1e-13
