"""Reliability-aware compression/transmission design for a MEC uplink.

Models the uplink latency of a compress-then-transmit link as a shifted
Gamma random variable, and solves the outage-constrained and
latency-constrained design problems plus the expected-sense baseline,
with Monte Carlo and brute-force verification.
"""

__version__ = "0.1.0"

from .model import (
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
from .montecarlo import SimConfig, SimReport, estimate_reliability, simulate_latency, simulate_outage
from .optimize import (
    ExpectedBaseline,
    GridSpec,
    LatencyConstrained,
    OutageConstrained,
    SolveResult,
    calibrate_gamma0,
    grid_oracle,
    no_compression_epsilon_threshold,
    solve_expected_baseline,
    solve_latency_constrained,
    solve_outage_constrained,
    w_objective,
)
from .specfun import RngStream, inv_reg_lower_gamma, ln_gamma, reg_lower_gamma

__all__ = [
    "DesignPoint",
    "ExpectedBaseline",
    "GridSpec",
    "InfeasibleDesignError",
    "LatencyConstrained",
    "OutageConstrained",
    "RngStream",
    "ShiftedGamma",
    "SimConfig",
    "SimReport",
    "SolveResult",
    "SystemParams",
    "calibrate_gamma0",
    "channel_uses",
    "cycles_per_bit",
    "epsilon_of_rate",
    "estimate_reliability",
    "expected_latency",
    "gamma0",
    "grid_oracle",
    "inv_reg_lower_gamma",
    "latency_quantile",
    "ln_gamma",
    "no_compression_epsilon_threshold",
    "rate_of_epsilon",
    "reg_lower_gamma",
    "simulate_latency",
    "simulate_outage",
    "solve_expected_baseline",
    "solve_latency_constrained",
    "solve_outage_constrained",
    "total_cdf",
    "total_latency_law",
    "total_pdf",
    "w_objective",
]
