import math
from dataclasses import replace

import numpy as np
import pytest
import scipy.integrate as integrate

from meclat.model import (
    DegenerateLawError,
    DesignPoint,
    InfeasibleDesignError,
    ShiftedGamma,
    SystemParams,
    channel_uses,
    cycles_per_bit,
    epsilon_of_rate,
    expected_latency,
    gamma0,
    latency_quantile,
    rate_of_epsilon,
    total_cdf,
    total_latency_law,
    total_pdf,
)

GAMMA0_TEST = 2.5e4


@pytest.fixture
def params():
    # reference parameter set at f_R = 5 GHz, gamma0 pinned for determinism
    return SystemParams(
        k0_linear=10 ** (-27 / 10),
        distance_m=2000.0,
        bandwidth_hz=10e6,
        noise_psd_w_per_hz=10 ** (-110 / 10) * 1e-3,
        tx_power_w=0.5,
        channel_use_s=0.5e-6,
        kappa=1.5,
        psi=3.5,
        clock_hz=5e9,
        data_bits=1e6,
        gamma0_override=GAMMA0_TEST,
    )


class TestCyclesPerBit:
    def test_no_compression_is_free(self):
        assert cycles_per_bit(1.0, 3.5) == 0.0

    def test_value_at_q2(self):
        assert cycles_per_bit(2.0, 3.5) == pytest.approx(
            math.exp(7.0) - math.exp(3.5), rel=1e-14
        )

    def test_monotone(self):
        assert cycles_per_bit(2.5, 3.5) > cycles_per_bit(2.0, 3.5)

    def test_strictly_convex(self):
        rng = np.random.default_rng(1)
        h = 1e-4
        for q in rng.uniform(1.0 + h, 4.0, size=50):
            d2 = (
                cycles_per_bit(q + h, 3.5)
                - 2 * cycles_per_bit(q, 3.5)
                + cycles_per_bit(q - h, 3.5)
            ) / h**2
            assert d2 > 0

    def test_domain_error(self):
        with pytest.raises(ValueError):
            cycles_per_bit(0.9, 3.5)


class TestGamma0:
    def test_linear_in_power(self, params):
        p = replace(params, gamma0_override=None)
        assert gamma0(replace(p, tx_power_w=1.0)) == pytest.approx(2 * gamma0(p), rel=1e-12)

    def test_inverse_square_in_distance(self, params):
        p = replace(params, gamma0_override=None)
        assert gamma0(replace(p, distance_m=4000.0)) == pytest.approx(
            gamma0(p) / 4, rel=1e-12
        )

    def test_reference_unit_conversion(self, params):
        # hand conversion: 10^-2.7 * 0.5 / (2000^2 * 1e-14 * 1e7)
        p = replace(params, gamma0_override=None)
        assert gamma0(p) == pytest.approx(2.4941e-3, rel=1e-4)

    def test_k0_denominator_variant(self, params):
        p = replace(params, gamma0_override=None, k0_in_numerator=False)
        assert gamma0(p) == pytest.approx(0.5 / (10**-2.7 * 4e6 * 1e-14 * 1e7), rel=1e-12)

    def test_override_wins(self, params):
        assert gamma0(params) == GAMMA0_TEST


class TestRate:
    def test_zero_at_zero_outage(self):
        assert rate_of_epsilon(0.0, 123.0) == 0.0

    def test_unit_rate_point(self):
        assert rate_of_epsilon(1 - math.exp(-1), 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_reference_value(self):
        assert rate_of_epsilon(0.1, GAMMA0_TEST) == pytest.approx(
            math.log2(1 + GAMMA0_TEST * math.log(1 / 0.9)), rel=1e-12
        )
        assert rate_of_epsilon(0.1, GAMMA0_TEST) == pytest.approx(11.364, abs=1e-3)

    def test_strictly_increasing(self):
        eps = np.linspace(1e-6, 0.999, 300)
        rates = [rate_of_epsilon(float(e), GAMMA0_TEST) for e in eps]
        assert all(b > a for a, b in zip(rates, rates[1:]))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            rate_of_epsilon(1.0, 10.0)

    def test_inverse_round_trip(self):
        r = rate_of_epsilon(0.3, GAMMA0_TEST)
        assert epsilon_of_rate(r, GAMMA0_TEST) == pytest.approx(0.3, abs=1e-12)

    def test_inverse_unit_point(self):
        assert epsilon_of_rate(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-12)

    def test_inverse_reference(self):
        assert epsilon_of_rate(11.364, GAMMA0_TEST) == pytest.approx(0.1, abs=1e-4)

    def test_inverse_domain_error(self):
        with pytest.raises(ValueError):
            epsilon_of_rate(0.0, 10.0)


class TestChannelUses:
    def test_unit_rate(self):
        # R(eps) = 1 when gamma0 * ln(1/(1-eps)) = 1
        eps = 1 - math.exp(-1)
        assert channel_uses(1000.0, eps, 1.0) == pytest.approx(1000.0, rel=1e-12)

    def test_linear_in_volume(self):
        a = channel_uses(1e6, 0.1, GAMMA0_TEST)
        b = channel_uses(5e5, 0.1, GAMMA0_TEST)
        assert b == pytest.approx(a / 2, rel=1e-12)

    def test_reference_value(self):
        assert channel_uses(5e5, 0.1, GAMMA0_TEST) == pytest.approx(
            5e5 / 11.363594304733011, rel=1e-9
        )


class TestTotalLaw:
    def test_no_compression_collapses_to_shift(self, params):
        law = total_latency_law(params, DesignPoint(1.0, 0.1))
        assert law.scale_s == 0.0
        assert law.shift_s > 0

    def test_mean_identity(self, params):
        dp = DesignPoint(2.0, 0.1)
        law = total_latency_law(params, dp)
        assert law.mean_s == pytest.approx(expected_latency(params, dp), rel=1e-12)

    def test_reference_mean(self, params):
        # term-by-term: 1e6*(e^7 - e^3.5)/5e9 + 1e6*0.5e-6/(2*R(0.1))
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        assert law.mean_s == pytest.approx(0.212704 + 0.022001, abs=5e-5)

    def test_epsilon_zero_is_infeasible(self, params):
        with pytest.raises((InfeasibleDesignError, ValueError)):
            total_latency_law(params, DesignPoint(2.0, 0.0))


class TestCdfPdf:
    def test_cdf_step_and_limits(self, params):
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        assert total_cdf(law, law.shift_s) == 0.0
        assert total_cdf(law, law.shift_s + 1e4 * law.scale_s) == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_step(self, params):
        law = total_latency_law(params, DesignPoint(1.0, 0.1))
        assert total_cdf(law, law.shift_s * 0.999) == 0.0
        assert total_cdf(law, law.shift_s * 1.001) == 1.0

    def test_chi_square_quantile_point(self, params):
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        t = law.shift_s + law.scale_s * 3.9074
        assert total_cdf(law, t) == pytest.approx(0.95, abs=1e-4)

    def test_pdf_normalizes(self, params):
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        total, _ = integrate.quad(
            lambda t: total_pdf(law, t), law.shift_s, law.shift_s + 50 * law.scale_s,
            limit=200,
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_pdf_is_cdf_derivative(self, params):
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        h = law.scale_s * 1e-6
        for z in np.linspace(0.2, 8.0, 20):
            t = law.shift_s + z * law.scale_s
            fd = (total_cdf(law, t + h) - total_cdf(law, t - h)) / (2 * h)
            assert fd == pytest.approx(total_pdf(law, t), rel=1e-6)

    def test_mode_location(self, params):
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        ts = np.linspace(law.shift_s + 1e-9, law.shift_s + 10 * law.scale_s, 20001)
        dens = [total_pdf(law, float(t)) for t in ts]
        t_mode = ts[int(np.argmax(dens))]
        expected = law.shift_s + (law.shape - 1) * law.scale_s
        assert t_mode == pytest.approx(expected, rel=1e-3)

    def test_degenerate_pdf_error(self, params):
        law = total_latency_law(params, DesignPoint(1.0, 0.1))
        with pytest.raises(DegenerateLawError):
            total_pdf(law, law.shift_s + 1.0)

    def test_cdf_second_derivative_changes_sign(self, params):
        # the total-latency CDF is neither convex nor concave for kappa = 1.5
        law = total_latency_law(params, DesignPoint(2.0, 0.1))
        h = law.scale_s * 1e-3

        def d2(t):
            return (total_cdf(law, t + h) - 2 * total_cdf(law, t) + total_cdf(law, t - h)) / h**2

        t1 = law.shift_s + 0.1 * law.scale_s
        t2 = law.shift_s + 5.0 * law.scale_s
        assert d2(t1) > 0
        assert d2(t2) < 0
        # inflection at shift + (kappa - 1) * scale
        t_inflect = law.shift_s + (law.shape - 1) * law.scale_s
        assert d2(t_inflect - 10 * h) > 0
        assert d2(t_inflect + 10 * h) < 0


class TestQuantile:
    def test_no_compression_rho_independent(self, params):
        dp = DesignPoint(1.0, 0.1)
        w1 = latency_quantile(params, dp, 0.5)
        w2 = latency_quantile(params, dp, 0.999)
        assert w1 == pytest.approx(w2, rel=1e-12)

    def test_round_trip_with_cdf(self, params):
        dp = DesignPoint(2.0, 0.1)
        law = total_latency_law(params, dp)
        for rho in (0.9, 0.95, 0.99, 0.999):
            w = latency_quantile(params, dp, rho)
            assert total_cdf(law, w) == pytest.approx(rho, abs=1e-9)

    def test_quantile_inflates_compression_term(self, params):
        # at rho = 0.95, kappa = 1.5, the compression term is tau0/kappa ~ 2.605x the mean's
        dp = DesignPoint(2.0, 0.1)
        law = total_latency_law(params, dp)
        w = latency_quantile(params, dp, 0.95)
        comp_mean = law.shape * law.scale_s
        comp_quant = w - law.shift_s
        assert comp_quant / comp_mean == pytest.approx(3.9074 / 1.5, abs=1e-3)


class TestExpectedLatency:
    def test_no_compression(self, params):
        dp = DesignPoint(1.0, 0.1)
        rate = rate_of_epsilon(0.1, GAMMA0_TEST)
        assert expected_latency(params, dp) == pytest.approx(
            params.data_bits * params.channel_use_s / rate, rel=1e-12
        )

    def test_epsilon_zero_infeasible(self, params):
        with pytest.raises((InfeasibleDesignError, ValueError)):
            expected_latency(params, DesignPoint(2.0, 0.0))


class TestTypeInvariants:
    def test_system_params_validation(self, params):
        with pytest.raises(ValueError):
            replace(params, bandwidth_hz=-1.0)
        with pytest.raises(ValueError):
            replace(params, kappa=0.2)
        with pytest.raises(ValueError):
            replace(params, data_bits=0.5)

    def test_design_point_validation(self):
        with pytest.raises(ValueError):
            DesignPoint(0.5, 0.1)
        with pytest.raises(ValueError):
            DesignPoint(2.0, 1.0)

    def test_shifted_gamma_validation(self):
        with pytest.raises(ValueError):
            ShiftedGamma(shape=-1.0, scale_s=1.0, shift_s=1.0)
        with pytest.raises(ValueError):
            ShiftedGamma(shape=1.5, scale_s=-1.0, shift_s=1.0)
