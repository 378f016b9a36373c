"""Parameter sweeps and validation runs, with CSV and manifest emission.

A sweep walks one axis (eps_th or t_th) across the cartesian product of
clock speeds and reliability targets, invoking the matching solver per
point.  Row order is deterministic (axis, then f_R, then rho) and float
formatting is fixed, so output files are byte-stable for a given config.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .config import RunConfig
from .model import DesignPoint, SystemParams, cycles_per_bit, gamma0
from .montecarlo import SimConfig, simulate_latency, simulate_outage
from .optimize import (
    SolveResult,
    solve_expected_baseline,
    solve_latency_constrained,
    solve_outage_constrained,
)
from .specfun import RngStream, inv_reg_lower_gamma

SWEEP_COLUMNS = (
    "problem",
    "axis",
    "axis_value",
    "fr_hz",
    "rho_th",
    "q_opt",
    "epsilon_opt",
    "objective",
    "feasible",
    "compression_fraction",
)

VALIDATE_COLUMNS = ("metric", "analytic", "empirical", "abs_error")

_BASELINE_RHO = math.nan  # rho column placeholder for expected-sense rows


@dataclass(frozen=True)
class SweepRow:
    problem: str
    axis: str
    axis_value: float
    fr_hz: float
    rho_th: float
    q_opt: float
    epsilon_opt: float
    objective: float
    feasible: bool
    compression_fraction: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


def _axis_values(cfg: RunConfig) -> np.ndarray:
    ax = cfg.axis
    if ax.scale == "log":
        return np.geomspace(ax.lo, ax.hi, ax.points)
    return np.linspace(ax.lo, ax.hi, ax.points)


def _compression_fraction(p: SystemParams, res: SolveResult, rho_th: float, budget: float) -> float:
    """Share of the relevant latency budget spent compressing at the optimum."""
    if not res.feasible:
        return math.nan
    if math.isnan(rho_th):  # expected-sense row: mean compression time vs budget
        comp = p.data_bits * cycles_per_bit(res.q_opt, p.psi) / p.clock_hz
    else:
        tau0 = inv_reg_lower_gamma(p.kappa, rho_th)
        comp = tau0 * p.data_bits * cycles_per_bit(res.q_opt, p.psi) / (p.kappa * p.clock_hz)
    return comp / budget


def run_sweep(cfg: RunConfig) -> SweepResult:
    """Execute the configured sweep; per-row infeasibility is recorded, not fatal.

    eps_th axis: outage-constrained solves per (point, f_R, rho).
    t_th axis: latency-constrained solves per (point, f_R, rho) plus one
    expected-sense baseline row per (point, f_R).
    """
    if cfg.axis is None:
        raise ValueError("run_sweep requires a sweep axis")
    rows: list[SweepRow] = []
    for value in _axis_values(cfg):
        for fr_ghz in cfg.fr_ghz_list:
            p = replace(cfg.system, clock_hz=fr_ghz * 1e9)
            if cfg.axis.name == "eps_th":
                for rho in cfg.rho_list:
                    res = solve_outage_constrained(p, float(value), rho)
                    rows.append(
                        SweepRow(
                            "p1a", "eps_th", float(value), p.clock_hz, rho,
                            res.q_opt, res.epsilon_opt, res.objective, res.feasible,
                            _compression_fraction(p, res, rho, res.objective),
                        )
                    )
            else:
                for rho in cfg.rho_list:
                    res = solve_latency_constrained(p, float(value), rho)
                    rows.append(
                        SweepRow(
                            "p2a", "t_th", float(value), p.clock_hz, rho,
                            res.q_opt, res.epsilon_opt, res.objective, res.feasible,
                            _compression_fraction(p, res, rho, float(value)),
                        )
                    )
                res = solve_expected_baseline(p, float(value))
                rows.append(
                    SweepRow(
                        "baseline", "t_th", float(value), p.clock_hz, _BASELINE_RHO,
                        res.q_opt, res.epsilon_opt, res.objective, res.feasible,
                        _compression_fraction(p, res, _BASELINE_RHO, float(value)),
                    )
                )
    return SweepResult(rows=tuple(rows))


def run_validate(cfg: RunConfig, design: DesignPoint | None = None) -> list[tuple]:
    """Monte Carlo check of the analytic model at a design point.

    When no design point is given, the latency-constrained problem is
    solved first at (t_th, rho_list[0]) and its optimum is re-simulated.
    Returns (metric, analytic, empirical, abs_error) rows.
    """
    rho = cfg.rho_list[0]
    if design is None:
        res = solve_latency_constrained(cfg.system, cfg.t_th_s, rho)
        if not res.feasible:
            raise ValueError(f"latency budget {cfg.t_th_s} s is infeasible; cannot validate")
        design = DesignPoint(q=res.q_opt, epsilon=res.epsilon_opt)

    from .model import expected_latency, latency_quantile, total_latency_law, total_cdf

    p = cfg.system
    sim = simulate_latency(
        SimConfig(
            n_samples=cfg.n_samples, seed=cfg.seed, design=design, params=p,
            quantiles=(rho,), reliability_at=(cfg.t_th_s,),
        )
    )
    quant = latency_quantile(p, design, rho)
    emp_outage = simulate_outage(
        design.epsilon, gamma0(p), cfg.n_samples, RngStream(cfg.seed, 2)
    )
    law = total_latency_law(p, design)
    rows = [
        ("q", design.q, design.q, 0.0),
        ("epsilon", design.epsilon, emp_outage, abs(design.epsilon - emp_outage)),
        ("mean_latency_s", expected_latency(p, design), sim.empirical_mean_s,
         abs(expected_latency(p, design) - sim.empirical_mean_s)),
        (f"quantile_{rho}_s", quant, sim.empirical_quantiles[rho],
         abs(quant - sim.empirical_quantiles[rho])),
        ("ks_distance", 0.0, sim.ks_distance, sim.ks_distance),
        (f"reliability_at_{cfg.t_th_s}",
         total_cdf(law, cfg.t_th_s) * (1.0 - design.epsilon),
         sim.empirical_reliability_at[cfg.t_th_s],
         abs(total_cdf(law, cfg.t_th_s) * (1.0 - design.epsilon)
             - sim.empirical_reliability_at[cfg.t_th_s])),
    ]
    return rows


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: str, columns: tuple[str, ...], rows) -> None:
    """Fixed-schema CSV: mandatory header, '.' decimals, %.12g floats."""
    lines = [",".join(columns)]
    for row in rows:
        values = row if isinstance(row, tuple) else tuple(getattr(row, c) for c in columns)
        lines.append(",".join(_fmt(v) for v in values))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def config_hash(cfg: RunConfig) -> str:
    # output location and plot toggle do not affect computed values
    semantic = replace(cfg, out_path="", make_plots=False)
    return hashlib.sha256(repr(semantic).encode()).hexdigest()


def write_manifest(path: str, cfg: RunConfig, command: str, n_rows: int) -> None:
    """Reproducibility record: config hash, code version, seed, gamma0 provenance."""
    if cfg.system.gamma0_override is not None:
        gamma0_source = "override (e.g. calibrated against a published anchor)"
    elif cfg.system.k0_in_numerator:
        gamma0_source = "derived: k0 * P_tx / (d^2 * N0 * B)"
    else:
        gamma0_source = "derived: P_tx / (k0 * d^2 * N0 * B)"
    manifest = {
        "command": command,
        "config_hash": config_hash(cfg),
        "version": __version__,
        "seed": cfg.seed,
        "gamma0": gamma0(cfg.system),
        "gamma0_source": gamma0_source,
        "rows": n_rows,
        "output": cfg.out_path,
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
