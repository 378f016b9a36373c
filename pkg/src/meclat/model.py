"""Analytic uplink-latency model.

A sensing device compresses a raw data volume (lossless, ratio Q >= 1)
and transmits it over a quasi-static Rayleigh fading link at the
epsilon-outage rate.  Compression cost per bit is Gamma-distributed, so
the total uplink latency follows a shifted Gamma law: a Gamma-distributed
compression time plus a deterministic transmission time.

All quantities are SI (seconds, Hz, W, bits).  dB/dBm conversions belong
to the config boundary, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import inv_reg_lower_gamma, reg_lower_gamma


class InfeasibleDesignError(ValueError):
    """Raised when a design point makes the latency unbounded (e.g. eps = 0)."""


class DegenerateLawError(ValueError):
    """Raised when a density is requested for a point-mass law (scale = 0)."""


@dataclass(frozen=True)
class SystemParams:
    """Physical and model constants of the link, all in linear SI units.

    gamma0_override, when set, bypasses the path-loss formula entirely;
    it exists because the mean-SNR expression is stated ambiguously in
    common parameter conventions (see gamma0) and because figure-level
    calibration fixes gamma0 directly.
    """

    k0_linear: float            # path-gain constant (linear, from dB input)
    distance_m: float
    bandwidth_hz: float
    noise_psd_w_per_hz: float   # linear, from dBm/Hz input
    tx_power_w: float
    channel_use_s: float        # duration of one channel use, T0
    kappa: float                # Gamma shape of the per-bit cycle count
    psi: float                  # compression-cost exponent
    clock_hz: float             # device processor clock, f_R
    data_bits: float            # raw data volume, D_f
    k0_in_numerator: bool = True
    gamma0_override: float | None = None

    def __post_init__(self):
        positive = {
            "k0_linear": self.k0_linear,
            "distance_m": self.distance_m,
            "bandwidth_hz": self.bandwidth_hz,
            "noise_psd_w_per_hz": self.noise_psd_w_per_hz,
            "tx_power_w": self.tx_power_w,
            "channel_use_s": self.channel_use_s,
            "psi": self.psi,
            "clock_hz": self.clock_hz,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"SystemParams.{name} must be positive, got {value}")
        if self.kappa < 0.5:
            raise ValueError(f"SystemParams.kappa must be >= 0.5, got {self.kappa}")
        if self.data_bits < 1:
            raise ValueError(f"SystemParams.data_bits must be >= 1, got {self.data_bits}")
        if self.gamma0_override is not None and not self.gamma0_override > 0:
            raise ValueError("SystemParams.gamma0_override must be positive when set")


@dataclass(frozen=True)
class DesignPoint:
    """A candidate operating pair: compression ratio and outage target."""

    q: float
    epsilon: float

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"DesignPoint.q must be >= 1, got {self.q}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"DesignPoint.epsilon must be in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class ShiftedGamma:
    """Total-latency law: Gamma(shape, scale_s) shifted right by shift_s.

    scale_s = 0 (no compression, Q = 1) is the degenerate point mass at
    shift_s and is represented explicitly: the CDF becomes a step and
    the PDF is undefined.
    """

    shape: float
    scale_s: float
    shift_s: float

    def __post_init__(self):
        if self.shape <= 0:
            raise ValueError(f"ShiftedGamma.shape must be positive, got {self.shape}")
        if self.scale_s < 0:
            raise ValueError(f"ShiftedGamma.scale_s must be >= 0, got {self.scale_s}")
        if self.shift_s <= 0:
            raise ValueError(f"ShiftedGamma.shift_s must be positive, got {self.shift_s}")

    @property
    def mean_s(self) -> float:
        return self.shift_s + self.shape * self.scale_s


def cycles_per_bit(q: float, psi: float) -> float:
    """Mean CPU cycles to compress one raw bit at ratio q: exp(q*psi) - exp(psi).

    Zero at q = 1, strictly increasing and strictly convex beyond.
    """
    if q < 1:
        raise ValueError(f"cycles_per_bit requires q >= 1, got {q}")
    if psi <= 0:
        raise ValueError(f"cycles_per_bit requires psi > 0, got {psi}")
    return math.exp(q * psi) - math.exp(psi)


def gamma0(p: SystemParams) -> float:
    """Mean SNR scale of the Rayleigh link (dimensionless).

    Default form: K0 * P_tx / (d^2 * N0 * B).  The literature also
    writes the same constant with K0 in the denominator; that variant is
    selected by k0_in_numerator=False.  gamma0_override short-circuits
    both.
    """
    if p.gamma0_override is not None:
        return p.gamma0_override
    noise_w = p.noise_psd_w_per_hz * p.bandwidth_hz
    if p.k0_in_numerator:
        return p.k0_linear * p.tx_power_w / (p.distance_m**2 * noise_w)
    return p.tx_power_w / (p.k0_linear * p.distance_m**2 * noise_w)


def rate_of_epsilon(epsilon: float, g0: float) -> float:
    """Epsilon-outage rate in bits per channel use: log2(1 + g0*ln(1/(1-eps)))."""
    if not 0 <= epsilon < 1:
        raise ValueError(f"rate_of_epsilon requires 0 <= epsilon < 1, got {epsilon}")
    if g0 <= 0:
        raise ValueError(f"rate_of_epsilon requires gamma0 > 0, got {g0}")
    return math.log2(1.0 - g0 * math.log1p(-epsilon))


def epsilon_of_rate(rate: float, g0: float) -> float:
    """Exact inverse of rate_of_epsilon: eps = 1 - exp(-(2^rate - 1)/g0).

    Saturates just below 1 for rates beyond floating-point range.
    """
    if rate <= 0:
        raise ValueError(f"epsilon_of_rate requires rate > 0, got {rate}")
    if g0 <= 0:
        raise ValueError(f"epsilon_of_rate requires gamma0 > 0, got {g0}")
    if rate > 1020:  # 2^rate overflows; eps is 1 to double precision
        return math.nextafter(1.0, 0.0)
    return min(-math.expm1(-(2.0**rate - 1.0) / g0), math.nextafter(1.0, 0.0))


def channel_uses(data_bits: float, epsilon: float, g0: float) -> float:
    """Channel uses needed for data_bits at outage epsilon: D / R(eps)."""
    rate = rate_of_epsilon(epsilon, g0)
    if rate == 0.0:
        raise InfeasibleDesignError("zero rate at epsilon = 0: infinite channel uses")
    return data_bits / rate


def tx_time(p: SystemParams, dp: DesignPoint) -> float:
    """Transmission time of the compressed volume: D_f*T0 / (Q*R(eps))."""
    rate = rate_of_epsilon(dp.epsilon, gamma0(p))
    if rate <= 0.0:
        raise InfeasibleDesignError("zero rate: transmission never completes")
    return p.data_bits * p.channel_use_s / (dp.q * rate)


def total_latency_law(p: SystemParams, dp: DesignPoint) -> ShiftedGamma:
    """Distribution of total uplink latency T = T_compress + T_transmit."""
    scale = p.data_bits * cycles_per_bit(dp.q, p.psi) / (p.kappa * p.clock_hz)
    return ShiftedGamma(shape=p.kappa, scale_s=scale, shift_s=tx_time(p, dp))


def total_cdf(law: ShiftedGamma, t: float) -> float:
    """P(T <= t) for the shifted Gamma law; a step at the shift when degenerate."""
    if t <= law.shift_s:
        return 0.0
    if law.scale_s == 0.0:
        return 1.0
    return reg_lower_gamma(law.shape, (t - law.shift_s) / law.scale_s)


def total_pdf(law: ShiftedGamma, t: float) -> float:
    """Density of the shifted Gamma law (per second); zero for t <= shift."""
    if law.scale_s == 0.0:
        raise DegenerateLawError("point-mass law has no density")
    if t <= law.shift_s:
        return 0.0
    z = (t - law.shift_s) / law.scale_s
    log_f = (law.shape - 1.0) * math.log(z) - z - math.lgamma(law.shape)
    return math.exp(log_f) / law.scale_s


def latency_quantile(p: SystemParams, dp: DesignPoint, rho: float) -> float:
    """rho-quantile of total latency; the design objective W(Q, eps).

    W = (tau0 * D_f / (kappa * f_R)) * C(Q) + D_f * T0 / (Q * R(eps))
    with tau0 the rho-quantile of the unit-scale Gamma(kappa) law.
    """
    if not 0 < rho < 1:
        raise ValueError(f"latency_quantile requires 0 < rho < 1, got {rho}")
    tau0 = inv_reg_lower_gamma(p.kappa, rho)
    comp = tau0 * p.data_bits * cycles_per_bit(dp.q, p.psi) / (p.kappa * p.clock_hz)
    return comp + tx_time(p, dp)


def expected_latency(p: SystemParams, dp: DesignPoint) -> float:
    """Mean total latency: D_f * [C(Q)/f_R + T0/(Q*R(eps))]."""
    return p.data_bits * cycles_per_bit(dp.q, p.psi) / p.clock_hz + tx_time(p, dp)
