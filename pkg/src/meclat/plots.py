"""Figure rendering for sweep results.

Renders the standard report figures next to the CSV output: optimal
latency / compression ratio / compression fraction against the outage
cap, and optimal outage / compression ratio against the latency budget.
Purely cosmetic layer over SweepResult; nothing here feeds back into the
numerics.
"""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .sweep import SweepResult


def _series(rows, y_attr):
    """Group rows into {(problem, fr_hz, rho): ([x], [y])}, feasible rows only."""
    grouped = defaultdict(lambda: ([], []))
    for r in rows:
        if not r.feasible:
            continue
        xs, ys = grouped[(r.problem, r.fr_hz, r.rho_th)]
        xs.append(r.axis_value)
        ys.append(getattr(r, y_attr))
    return grouped


def _label(problem, fr_hz, rho):
    tag = f"f_R={fr_hz / 1e9:g} GHz"
    if problem == "baseline" or (isinstance(rho, float) and math.isnan(rho)):
        return f"{tag}, expected-sense"
    return f"{tag}, rho={rho:g}"


def _panel(rows, y_attr, xlabel, ylabel, path, logx=False, logy=False):
    fig, ax = plt.subplots(figsize=(6, 4))
    for (problem, fr_hz, rho), (xs, ys) in sorted(
        _series(rows, y_attr).items(), key=lambda kv: (kv[0][1], str(kv[0][2]))
    ):
        ax.plot(xs, ys, marker=".", label=_label(problem, fr_hz, rho))
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figures(result: SweepResult, stem: str) -> list[str]:
    """Write PNG panels for a sweep; returns the created file paths.

    stem is the output path without extension, typically the CSV path
    with '.csv' stripped.
    """
    rows = result.rows
    if not rows:
        return []
    axis = rows[0].axis
    paths = []
    if axis == "eps_th":
        panels = [
            ("objective", "outage cap eps_th", "optimal latency quantile [s]", True, False),
            ("q_opt", "outage cap eps_th", "optimal compression ratio Q", True, False),
            ("compression_fraction", "outage cap eps_th", "latency fraction spent compressing", True, False),
        ]
    else:
        panels = [
            ("epsilon_opt", "latency budget T_th [s]", "optimal outage", False, True),
            ("q_opt", "latency budget T_th [s]", "optimal compression ratio Q", False, False),
        ]
    for y_attr, xlabel, ylabel, logx, logy in panels:
        path = f"{stem}_{y_attr}.png"
        _panel(rows, y_attr, xlabel, ylabel, path, logx=logx, logy=logy)
        paths.append(path)
    return paths
