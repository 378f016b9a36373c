"""Design-problem solvers.

Three 1-D problems, all reduced from the stochastic-latency formulation:

* outage-constrained: minimize the rho-quantile latency W(Q, eps) subject
  to eps <= eps_th.  W is strictly decreasing in eps, so eps* = eps_th
  and the remaining problem in Q is strictly convex.
* latency-constrained: minimize outage subject to the rho-quantile
  meeting a budget T_th.  Equivalent to maximizing the concave
  U(Q) = (Q / (D_f*T0)) * (T_th - tau0*D_f*C(Q)/(kappa*f_R)).
* expected-sense baseline: the same with the mean in place of the
  quantile, V(Q) = (Q/T0) * (T_th/D_f - C(Q)/f_R).

Each solver is certified by a brute-force grid oracle (grid_oracle),
which evaluates the original constrained objective directly and never
goes through the U/V transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    SystemParams,
    cycles_per_bit,
    epsilon_of_rate,
    gamma0,
    rate_of_epsilon,
)
from .specfun import inv_reg_lower_gamma

EPS_MIN = 1e-9        # eps = 0 makes the rate zero and the latency unbounded
EPS_MAX = 1.0 - 1e-12
_QTOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True)
class SolveResult:
    q_opt: float
    epsilon_opt: float
    objective: float        # seconds for the outage-constrained problem, else probability
    iterations: int
    feasible: bool
    active_constraints: frozenset[str] = frozenset()


@dataclass(frozen=True)
class GridSpec:
    """Brute-force grid: linear in q, log-spaced in epsilon."""

    q_max: float = 6.0
    n_q: int = 2000
    eps_min: float = 1e-6
    eps_max: float = 0.5
    n_eps: int = 2000

    def __post_init__(self):
        if self.n_q < 2 or self.n_eps < 2:
            raise ValueError("GridSpec needs at least 2 points per axis")
        if not (self.q_max > 1 and 0 < self.eps_min < self.eps_max < 1):
            raise ValueError("GridSpec ranges out of domain")

    def q_points(self) -> np.ndarray:
        return np.linspace(1.0, self.q_max, self.n_q)

    def eps_points(self) -> np.ndarray:
        return np.geomspace(self.eps_min, self.eps_max, self.n_eps)


@dataclass(frozen=True)
class OutageConstrained:
    eps_th: float
    rho_th: float


@dataclass(frozen=True)
class LatencyConstrained:
    t_th: float
    rho_th: float


@dataclass(frozen=True)
class ExpectedBaseline:
    t_th: float


def w_objective(p: SystemParams, q: float, epsilon: float, rho_th: float) -> float:
    """Quantile latency W(Q, eps); identical to model.latency_quantile."""
    tau0 = inv_reg_lower_gamma(p.kappa, rho_th)
    rate = rate_of_epsilon(epsilon, gamma0(p))
    if rate <= 0:
        raise ValueError("w_objective undefined at zero rate")
    return (
        tau0 * p.data_bits * cycles_per_bit(q, p.psi) / (p.kappa * p.clock_hz)
        + p.data_bits * p.channel_use_s / (q * rate)
    )


def _safeguarded_newton(f, fprime, lo, hi, flo_sign):
    """Root of monotone f on [lo, hi] by Newton with bisection fallback.

    flo_sign is the sign of f(lo); any Newton step leaving the bracket is
    replaced by its midpoint.  Returns (root, iterations).
    """
    x = 0.5 * (lo + hi)
    for it in range(1, _MAX_ITER + 1):
        fx = f(x)
        if (fx < 0) == (flo_sign < 0):
            lo = x
        else:
            hi = x
        d = fprime(x)
        x_new = x - fx / d if d != 0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= _QTOL * max(abs(x), 1.0):
            return x_new, it
        x = x_new
    raise RuntimeError("safeguarded Newton failed to converge")


def solve_outage_constrained(p: SystemParams, eps_th: float, rho_th: float) -> SolveResult:
    """Minimize the rho_th-quantile latency over Q >= 1, eps in (0, eps_th].

    W decreases in eps, so the outage cap binds; the Q problem is
    strictly convex and solved on the stationarity condition
    a*psi*exp(psi*q) = b/q^2 with a = tau0*D_f/(kappa*f_R),
    b = D_f*T0/R(eps_th).
    """
    if eps_th <= 0:
        raise ValueError(f"eps_th must be positive, got {eps_th}")
    if not 0 < rho_th < 1:
        raise ValueError(f"rho_th must be in (0, 1), got {rho_th}")
    eps = min(max(eps_th, EPS_MIN), EPS_MAX)

    tau0 = inv_reg_lower_gamma(p.kappa, rho_th)
    a = tau0 * p.data_bits / (p.kappa * p.clock_hz)
    b = p.data_bits * p.channel_use_s / rate_of_epsilon(eps, gamma0(p))
    psi = p.psi

    def dW(q):
        return a * psi * math.exp(psi * q) - b / q**2

    active = {"eps=eps_th"}
    if dW(1.0) >= 0:
        q_opt, iters = 1.0, 0
        active.add("Q=1")
    else:
        hi, iters = 2.0, 0
        while dW(hi) < 0:
            hi *= 2.0
            iters += 1
            if hi > 1e6:
                raise RuntimeError("failed to bracket the quantile-latency minimum")
        q_opt, newton_iters = _safeguarded_newton(
            dW, lambda q: a * psi**2 * math.exp(psi * q) + 2 * b / q**3, 1.0, hi, -1.0
        )
        iters += newton_iters

    return SolveResult(
        q_opt=q_opt,
        epsilon_opt=eps,
        objective=w_objective(p, q_opt, eps, rho_th),
        iterations=iters,
        feasible=True,
        active_constraints=frozenset(active),
    )


def _maximize_rate_inverse(p: SystemParams, t_th: float, tau_over_kappa: float):
    """Maximize G(Q) = (Q/(D_f*T0)) * (T_th - tau_over_kappa*D_f*C(Q)/f_R) over Q >= 1.

    Shared core of the latency-constrained problem (tau_over_kappa =
    tau0/kappa) and the expected-sense baseline (tau_over_kappa = 1).
    G is concave; returns (q_opt, G(q_opt), iterations, boundary_active).
    """
    psi = p.psi
    exp_psi = math.exp(psi)
    c = tau_over_kappa * p.data_bits / p.clock_hz

    def G(q):
        return q * (t_th - c * cycles_per_bit(q, psi)) / (p.data_bits * p.channel_use_s)

    def dG(q):
        # d/dq [q*C(q)] = (1 + q*psi)*exp(q*psi) - exp(psi)
        return (t_th - c * ((1 + q * psi) * math.exp(q * psi) - exp_psi)) / (
            p.data_bits * p.channel_use_s
        )

    def d2G(q):
        return -c * (2 * psi + q * psi**2) * math.exp(q * psi) / (
            p.data_bits * p.channel_use_s
        )

    if dG(1.0) <= 0:
        return 1.0, G(1.0), 0, True
    hi, iters = 2.0, 0
    while dG(hi) > 0:
        hi *= 2.0
        iters += 1
        if hi > 1e6:
            raise RuntimeError("failed to bracket the rate-inverse maximum")
    q_opt, newton_iters = _safeguarded_newton(dG, d2G, 1.0, hi, +1.0)
    return q_opt, G(q_opt), iters + newton_iters, False


def _rate_inverse_result(p: SystemParams, q_opt, g_star, iters, boundary) -> SolveResult:
    active = frozenset({"Q=1"}) if boundary else frozenset()
    # Infeasible when the required rate exceeds what the outage clamp
    # eps <= EPS_MAX allows: the budget is below the transmission floor.
    if g_star <= 0 or 1.0 / g_star > rate_of_epsilon(EPS_MAX, gamma0(p)):
        return SolveResult(
            q_opt=q_opt, epsilon_opt=math.nan, objective=math.inf,
            iterations=iters, feasible=False, active_constraints=active,
        )
    eps = epsilon_of_rate(1.0 / g_star, gamma0(p))
    return SolveResult(
        q_opt=q_opt, epsilon_opt=eps, objective=eps,
        iterations=iters, feasible=True, active_constraints=active,
    )


def solve_latency_constrained(p: SystemParams, t_th: float, rho_th: float) -> SolveResult:
    """Minimize outage subject to the rho_th-quantile latency <= t_th.

    The budget constraint binds at the optimum, which turns the problem
    into maximizing the concave U(Q); the optimal outage is recovered
    from R(eps*) = 1/U(Q*).  Infeasible when U <= 0 for every Q >= 1.
    """
    if t_th <= 0:
        raise ValueError(f"t_th must be positive, got {t_th}")
    if not 0 < rho_th < 1:
        raise ValueError(f"rho_th must be in (0, 1), got {rho_th}")
    tau0 = inv_reg_lower_gamma(p.kappa, rho_th)
    q_opt, u_star, iters, boundary = _maximize_rate_inverse(p, t_th, tau0 / p.kappa)
    return _rate_inverse_result(p, q_opt, u_star, iters, boundary)


def solve_expected_baseline(p: SystemParams, t_th: float) -> SolveResult:
    """Expected-sense variant: minimize outage subject to mean latency <= t_th.

    Maximizes the concave V(Q) = (Q/T0) * (T_th/D_f - C(Q)/f_R); kept as
    the comparison baseline for the quantile-aware design.
    """
    if t_th <= 0:
        raise ValueError(f"t_th must be positive, got {t_th}")
    q_opt, v_star, iters, boundary = _maximize_rate_inverse(p, t_th, 1.0)
    return _rate_inverse_result(p, q_opt, v_star, iters, boundary)


def no_compression_epsilon_threshold(p: SystemParams, rho_th: float) -> float:
    """Outage cap beyond which skipping compression (Q = 1) is optimal.

    Q = 1 binds in the outage-constrained problem exactly when
    R(eps_th) >= kappa*f_R*T0 / (tau0*psi*exp(psi)).
    """
    tau0 = inv_reg_lower_gamma(p.kappa, rho_th)
    rate = p.kappa * p.clock_hz * p.channel_use_s / (tau0 * p.psi * math.exp(p.psi))
    return epsilon_of_rate(rate, gamma0(p))


def calibrate_gamma0(p: SystemParams, t_th: float, target_eps: float) -> float:
    """Mean-SNR scale that makes the expected-sense baseline hit target_eps at t_th.

    V(Q) does not involve gamma0, so the calibration is closed-form:
    gamma0 = (2^(1/V*) - 1) / ln(1/(1 - target_eps)).
    """
    if not 0 < target_eps < 1:
        raise ValueError(f"target_eps must be in (0, 1), got {target_eps}")
    _, v_star, _, _ = _maximize_rate_inverse(p, t_th, 1.0)
    if v_star <= 0 or 1.0 / v_star > 1020:
        raise ValueError("anchor budget is infeasible: it demands an unattainable rate")
    return (2.0 ** (1.0 / v_star) - 1.0) / (-math.log1p(-target_eps))


def _w_grid(p: SystemParams, q: np.ndarray, eps: np.ndarray, tau0: float) -> np.ndarray:
    """Vectorized W over a q x eps mesh (rows: q, cols: eps)."""
    g0 = gamma0(p)
    cq = np.exp(p.psi * q) - math.exp(p.psi)
    rate = np.log2(1.0 - g0 * np.log1p(-eps))
    comp = tau0 * p.data_bits * cq / (p.kappa * p.clock_hz)
    return comp[:, None] + p.data_bits * p.channel_use_s / (q[:, None] * rate[None, :])


def grid_oracle(p: SystemParams, problem, grid: GridSpec) -> SolveResult:
    """Brute-force certification of the analytic solvers.

    Outage-constrained: exhaustive W evaluation over the full mesh with
    eps > eps_th masked infeasible.  Latency/expected-constrained: for
    every grid q, the smallest feasible eps is located by bisecting the
    original latency constraint in eps (the constraint is monotone), so
    the oracle shares no algebra with the U/V reformulation.
    """
    q = grid.q_points()
    eps = grid.eps_points()

    if isinstance(problem, OutageConstrained):
        tau0 = inv_reg_lower_gamma(p.kappa, problem.rho_th)
        w = _w_grid(p, q, eps, tau0)
        w[:, eps > problem.eps_th] = np.inf
        if not np.isfinite(w).any():
            raise ValueError("grid oracle: empty feasible set")
        i, j = np.unravel_index(np.argmin(w), w.shape)
        return SolveResult(
            q_opt=float(q[i]), epsilon_opt=float(eps[j]), objective=float(w[i, j]),
            iterations=w.size, feasible=True,
        )

    if isinstance(problem, LatencyConstrained):
        tau0 = inv_reg_lower_gamma(p.kappa, problem.rho_th)
        t_th = problem.t_th
    elif isinstance(problem, ExpectedBaseline):
        tau0 = p.kappa  # tau0/kappa = 1 recovers the mean latency
        t_th = problem.t_th
    else:
        raise TypeError(f"unknown problem type: {problem!r}")

    g0 = gamma0(p)
    comp = tau0 * p.data_bits * (np.exp(p.psi * q) - math.exp(p.psi)) / (
        p.kappa * p.clock_hz
    )

    def latency(eps_arr):
        rate = np.log2(1.0 - g0 * np.log1p(-eps_arr))
        return comp + p.data_bits * p.channel_use_s / (q * rate)

    # Smallest eps meeting the budget at each q, by bisection in log-eps;
    # the latency constraint is strictly decreasing in eps.
    lo = np.full_like(q, grid.eps_min)
    hi = np.full_like(q, min(grid.eps_max, EPS_MAX))
    feasible = latency(hi) <= t_th
    already = latency(lo) <= t_th  # budget met even at the smallest grid eps
    evals = 0
    for _ in range(80):
        mid = np.sqrt(lo * hi)
        too_slow = latency(mid) > t_th
        lo = np.where(too_slow, mid, lo)
        hi = np.where(too_slow, hi, mid)
        evals += q.size
    eps_star = np.where(already, grid.eps_min, hi)
    eps_star = np.where(feasible, eps_star, np.inf)

    j = int(np.argmin(eps_star))
    if not np.isfinite(eps_star[j]):
        return SolveResult(
            q_opt=math.nan, epsilon_opt=math.nan, objective=math.inf,
            iterations=evals, feasible=False,
        )
    return SolveResult(
        q_opt=float(q[j]), epsilon_opt=float(eps_star[j]), objective=float(eps_star[j]),
        iterations=evals, feasible=True,
    )
