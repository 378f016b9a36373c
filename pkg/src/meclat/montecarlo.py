"""Monte Carlo validation of the analytic latency and outage claims.

Each trial draws a per-bit compression cycle count X ~ Gamma(kappa,
C(Q)/kappa), giving a compression time D_f*X/f_R, and adds the
deterministic transmission time of the compressed volume; the channel is
quasi-static, so outage is a single SNR-threshold event per transmission
(one Exp(1) fading draw compared against gamma_th/gamma0).

Generation is chunked so the n = 1e8 outage runs stay in constant
memory; latency samples are retained in full for quantile/KS statistics,
which bounds simulate_latency to n around 1e7 at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    DesignPoint,
    SystemParams,
    cycles_per_bit,
    total_cdf,
    total_latency_law,
    tx_time,
)
from .specfun import RngStream, sample_exponential, sample_gamma

_CHUNK = 1_000_000


@dataclass(frozen=True)
class SimConfig:
    n_samples: int
    seed: int
    design: DesignPoint
    params: SystemParams
    stream_id: int = 0
    quantiles: tuple[float, ...] = (0.5, 0.9, 0.95, 0.99)
    reliability_at: tuple[float, ...] = ()

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")


@dataclass(frozen=True)
class SimReport:
    n_samples: int
    empirical_mean_s: float
    empirical_quantiles: dict[float, float]
    ks_distance: float
    empirical_outage: float
    empirical_reliability_at: dict[float, float]

    def __post_init__(self):
        if not 0 <= self.empirical_outage <= 1:
            raise ValueError("empirical_outage out of [0, 1]")
        if self.ks_distance < 0:
            raise ValueError("ks_distance must be >= 0")


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance between samples and a CDF."""
    x = np.sort(np.asarray(samples))
    n = x.size
    f = np.array([cdf(v) for v in x])
    ecdf_hi = np.arange(1, n + 1) / n
    ecdf_lo = np.arange(0, n) / n
    return float(max(np.max(ecdf_hi - f), np.max(f - ecdf_lo)))


def _draw_latencies(cfg: SimConfig, rng: RngStream) -> np.ndarray:
    p, dp = cfg.params, cfg.design
    shift = tx_time(p, dp)
    c_q = cycles_per_bit(dp.q, p.psi)
    out = np.empty(cfg.n_samples)
    done = 0
    while done < cfg.n_samples:
        m = min(_CHUNK, cfg.n_samples - done)
        if c_q == 0.0:  # Q = 1: compression skipped, latency is deterministic
            t_c = np.zeros(m)
        else:
            x = sample_gamma(p.kappa, c_q / p.kappa, rng, size=m)
            t_c = p.data_bits * x / p.clock_hz
        out[done : done + m] = shift + t_c
        done += m
    return out


def _draw_outages(cfg: SimConfig, rng: RngStream) -> np.ndarray:
    # g ~ Exp(1) against gamma_th/gamma0 = ln(1/(1-eps))
    threshold = -math.log1p(-cfg.design.epsilon)
    g = sample_exponential(1.0, rng, size=cfg.n_samples)
    return g < threshold


def simulate_latency(cfg: SimConfig) -> SimReport:
    """Draw n_samples total-latency (and outage) realizations, aggregate stats.

    Deterministic for a fixed SimConfig: the latency stream uses
    (seed, stream_id) and the outage stream (seed, stream_id + 1).
    """
    law = total_latency_law(cfg.params, cfg.design)
    t = _draw_latencies(cfg, RngStream(cfg.seed, cfg.stream_id))
    outages = _draw_outages(cfg, RngStream(cfg.seed, cfg.stream_id + 1))

    quantiles = {rho: float(np.quantile(t, rho)) for rho in cfg.quantiles}
    ok = ~outages
    reliability = {
        deadline: float(np.mean((t <= deadline) & ok))
        for deadline in cfg.reliability_at
    }
    return SimReport(
        n_samples=cfg.n_samples,
        empirical_mean_s=float(np.mean(t)),
        empirical_quantiles=quantiles,
        ks_distance=ks_statistic(t, lambda v: total_cdf(law, v)),
        empirical_outage=float(np.mean(outages)),
        empirical_reliability_at=reliability,
    )


def simulate_outage(epsilon: float, g0: float, n: int, rng: RngStream) -> float:
    """Empirical outage frequency over n independent fading realizations."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    gamma_th = g0 * -math.log1p(-epsilon)  # = 2^R(eps) - 1
    threshold = gamma_th / g0
    hits = 0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        g = sample_exponential(1.0, rng, size=m)
        hits += int(np.count_nonzero(g < threshold))
        done += m
    return hits / n


def estimate_reliability(cfg: SimConfig, t: float, include_outage: bool = True) -> float:
    """Fraction of trials finishing by deadline t with a successful transmission.

    Latency and the fading draw are independent, so with outage included
    this estimates F_T(t) * (1 - eps); the deadline-only reliability target
    rho_th corresponds to include_outage=False.
    """
    samples = _draw_latencies(cfg, RngStream(cfg.seed, cfg.stream_id))
    hit = samples <= t
    if include_outage:
        hit &= ~_draw_outages(cfg, RngStream(cfg.seed, cfg.stream_id + 1))
    return float(np.mean(hit))
