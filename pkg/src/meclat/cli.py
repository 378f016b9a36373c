"""Command-line experiment runner.

Subcommands:
  solve-p1        outage-constrained latency minimization at one eps_th
  solve-p2        latency-constrained outage minimization at one T_th
  solve-baseline  expected-sense variant of solve-p2
  sweep           walk an axis (eps_th or t_th), emit CSV (+ optional figures)
  validate        Monte Carlo check of the analytic model at a design point

Exit codes: 0 success, 2 config error, 3 infeasible single solve,
4 internal numeric failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import AxisSpec, ConfigError, RunConfig, default_config, parse_config
from .model import DesignPoint, gamma0
from .optimize import (
    solve_expected_baseline,
    solve_latency_constrained,
    solve_outage_constrained,
)
from .sweep import (
    SWEEP_COLUMNS,
    VALIDATE_COLUMNS,
    run_sweep,
    run_validate,
    write_csv,
    write_manifest,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meclat",
        description="Reliability-aware compression/transmission design for a MEC uplink.",
    )
    parser.add_argument("--config", help="key-value config file")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int, help="RNG seed")
    parser.add_argument("--rho", help="comma-separated reliability targets")
    parser.add_argument("--fr-ghz", help="comma-separated clock speeds in GHz")
    sub = parser.add_subparsers(dest="command", required=True)

    p1 = sub.add_parser("solve-p1", help="minimize latency quantile at an outage cap")
    p1.add_argument("--eps-th", type=float, help="outage cap")

    p2 = sub.add_parser("solve-p2", help="minimize outage at a latency budget")
    p2.add_argument("--t-th-ms", type=float, help="latency budget in ms")

    base = sub.add_parser("solve-baseline", help="expected-sense baseline solve")
    base.add_argument("--t-th-ms", type=float, help="latency budget in ms")

    sw = sub.add_parser("sweep", help="axis sweep with CSV + manifest output")
    sw.add_argument("--axis", help="name:min:max:points:lin|log (eps_th or t_th)")
    sw.add_argument("--plot", action="store_true", help="also render PNG figures")

    val = sub.add_parser("validate", help="Monte Carlo validation run")
    val.add_argument("--q", type=float, help="compression ratio (with --eps)")
    val.add_argument("--eps", type=float, help="outage probability (with --q)")
    val.add_argument("--t-th-ms", type=float, help="budget used when solving the design point")
    val.add_argument("--n", type=int, help="number of Monte Carlo samples")
    return parser


def _load_config(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = default_config()
    updates = {}
    if args.out is not None:
        updates["out_path"] = args.out
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.rho is not None:
        updates["rho_list"] = tuple(float(x) for x in args.rho.split(","))
    if args.fr_ghz is not None:
        updates["fr_ghz_list"] = tuple(float(x) for x in args.fr_ghz.split(","))
    if getattr(args, "axis", None) is not None:
        updates["axis"] = AxisSpec.parse(args.axis)
    if getattr(args, "eps_th", None) is not None:
        updates["eps_th"] = args.eps_th
    if getattr(args, "t_th_ms", None) is not None:
        updates["t_th_s"] = args.t_th_ms / 1e3
    if getattr(args, "n", None) is not None:
        updates["n_samples"] = args.n
    if getattr(args, "plot", False):
        updates["make_plots"] = True
    cfg = replace(cfg, **updates)
    for rho in cfg.rho_list:
        if not 0 < rho < 1:
            raise ConfigError(f"rho values must be in (0, 1), got {rho}")
    return cfg


def _print_solution(kind: str, cfg: RunConfig, res) -> None:
    print(f"problem: {kind}")
    print(f"gamma0: {gamma0(cfg.system):.6g}")
    print(f"q_opt: {res.q_opt:.9g}")
    print(f"epsilon_opt: {res.epsilon_opt:.9g}")
    print(f"objective: {res.objective:.9g}")
    print(f"feasible: {str(res.feasible).lower()}")
    if res.active_constraints:
        print(f"active_constraints: {sorted(res.active_constraints)}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "solve-p1":
            res = solve_outage_constrained(cfg.system, cfg.eps_th, cfg.rho_list[0])
            _print_solution("outage-constrained (P1a)", cfg, res)
            return EXIT_OK if res.feasible else EXIT_INFEASIBLE
        if args.command == "solve-p2":
            res = solve_latency_constrained(cfg.system, cfg.t_th_s, cfg.rho_list[0])
            _print_solution("latency-constrained (P2a)", cfg, res)
            return EXIT_OK if res.feasible else EXIT_INFEASIBLE
        if args.command == "solve-baseline":
            res = solve_expected_baseline(cfg.system, cfg.t_th_s)
            _print_solution("expected-sense baseline (A)", cfg, res)
            return EXIT_OK if res.feasible else EXIT_INFEASIBLE
        if args.command == "sweep":
            if cfg.axis is None:
                print("config error: sweep requires --axis or an axis key", file=sys.stderr)
                return EXIT_CONFIG
            result = run_sweep(cfg)
            write_csv(cfg.out_path, SWEEP_COLUMNS, result.rows)
            write_manifest(cfg.out_path + ".manifest.json", cfg, "sweep", len(result.rows))
            print(f"wrote {len(result.rows)} rows to {cfg.out_path}")
            if cfg.make_plots:
                from .plots import render_sweep_figures

                stem = cfg.out_path[:-4] if cfg.out_path.endswith(".csv") else cfg.out_path
                for path in render_sweep_figures(result, stem):
                    print(f"wrote {path}")
            return EXIT_OK
        if args.command == "validate":
            design = None
            if (args.q is None) != (args.eps is None):
                print("config error: --q and --eps must be given together", file=sys.stderr)
                return EXIT_CONFIG
            if args.q is not None:
                design = DesignPoint(q=args.q, epsilon=args.eps)
            rows = run_validate(cfg, design)
            write_csv(cfg.out_path, VALIDATE_COLUMNS, rows)
            write_manifest(cfg.out_path + ".manifest.json", cfg, "validate", len(rows))
            print(f"wrote {len(rows)} rows to {cfg.out_path}")
            return EXIT_OK
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, ValueError) as exc:
        # domain/validation errors at solve time count as config problems,
        # except explicit infeasibility which run_validate raises as ValueError
        if "infeasible" in str(exc).lower():
            print(f"infeasible: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, FloatingPointError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
