"""Special-function and sampling kernel.

Provides the regularized lower incomplete gamma function, its inverse,
and seeded Gamma/exponential samplers.  Everything the latency model and
the Monte Carlo harness need lives here; no other module touches raw
randomness.

Naming note: the regularized lower incomplete gamma function is written
P(s, x) = (1/Gamma(s)) * integral_0^x t^(s-1) e^(-t) dt throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_MAX_ITER = 200
_EPS = 1e-15


def ln_gamma(s: float) -> float:
    """Natural log of the Gamma function, ln Gamma(s), for s > 0."""
    if s <= 0:
        raise ValueError(f"ln_gamma requires s > 0, got {s}")
    return math.lgamma(s)


def _lower_gamma_series(s: float, x: float) -> float:
    # P(s, x) by power series, converges fast for x < s + 1.
    term = 1.0 / s
    total = term
    a = s
    for _ in range(10 * _MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))


def _upper_gamma_cf(s: float, x: float) -> float:
    # Q(s, x) = 1 - P(s, x) by modified Lentz continued fraction,
    # for x >= s + 1.
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10 * _MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))


def reg_lower_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x), in [0, 1).

    Series expansion for x < s + 1, continued fraction for the upper
    tail otherwise; absolute error below 1e-12 over the supported range.
    """
    if s <= 0:
        raise ValueError(f"reg_lower_gamma requires s > 0, got s={s}")
    if x < 0:
        raise ValueError(f"reg_lower_gamma requires x >= 0, got x={x}")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return _lower_gamma_series(s, x)
    return 1.0 - _upper_gamma_cf(s, x)


def inv_reg_lower_gamma(s: float, p: float) -> float:
    """Inverse of reg_lower_gamma in x: returns x with P(s, x) = p.

    Bisection to a safe bracket followed by Newton polishing; iteration
    cap 200 (raises RuntimeError if exceeded, which signals a
    pathological shape parameter rather than a caller bug).
    """
    if s <= 0:
        raise ValueError(f"inv_reg_lower_gamma requires s > 0, got s={s}")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"inv_reg_lower_gamma requires 0 <= p < 1, got p={p}")
    if p == 0.0:
        return 0.0

    lo, hi = 0.0, max(s, 1.0)
    it = 0
    while reg_lower_gamma(s, hi) < p:
        lo = hi
        hi *= 2.0
        it += 1
        if it > _MAX_ITER:
            raise RuntimeError("inv_reg_lower_gamma: bracket growth failed")

    # Bisect until the bracket is tight enough for Newton to be safe.
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if reg_lower_gamma(s, mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-8 * max(hi, 1.0):
            break

    x = 0.5 * (lo + hi)
    log_norm = math.lgamma(s)
    for _ in range(_MAX_ITER):
        f = reg_lower_gamma(s, x) - p
        if abs(f) <= 1e-15 * max(p, 1e-3):
            break
        if f > 0:
            hi = x
        else:
            lo = x
        dens = math.exp((s - 1.0) * math.log(x) - x - log_norm)
        x_new = x - f / dens if dens > 0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
    else:
        raise RuntimeError(f"inv_reg_lower_gamma: no convergence for s={s}, p={p}")
    return x


@dataclass
class RngStream:
    """Seeded, stream-addressable random source.

    Backed by numpy's PCG64 keyed by SeedSequence(seed, spawn_key=(stream_id,)):
    identical (seed, stream_id) pairs replay the same sequence, distinct
    stream_ids give statistically independent streams.  Single-owner
    mutable state; parallel callers must use distinct stream_ids.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def uniform(self, size=None):
        return self._gen.random(size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)


def sample_gamma(shape: float, scale: float, rng: RngStream, size: int | None = None):
    """Draw from Gamma(shape, scale) by Marsaglia-Tsang squeeze rejection.

    Valid for all shape > 0: shapes below 1 are boosted by sampling
    Gamma(shape + 1) and multiplying by U^(1/shape).  Returns a scalar
    when size is None, else an ndarray of the requested length.
    """
    if shape <= 0 or scale <= 0:
        raise ValueError(f"sample_gamma requires positive parameters, got shape={shape}, scale={scale}")
    n = 1 if size is None else int(size)
    boost = None
    k = shape
    if shape < 1.0:
        boost = rng.uniform(n) ** (1.0 / shape)
        k = shape + 1.0

    d = k - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    pending = np.arange(n)
    while pending.size:
        m = pending.size
        z = rng.standard_normal(m)
        v = (1.0 + c * z) ** 3
        u = rng.uniform(m)
        ok = v > 0
        accept = np.zeros(m, dtype=bool)
        # squeeze test first, log test for the stragglers
        zz = z[ok] ** 2
        vv = v[ok]
        quick = u[ok] < 1.0 - 0.0331 * zz * zz
        slow = ~quick & (np.log(u[ok]) < 0.5 * zz + d * (1.0 - vv + np.log(vv)))
        acc_ok = quick | slow
        accept[ok] = acc_ok
        idx = pending[accept]
        out[idx] = d * v[accept]
        pending = pending[~accept]

    out *= scale
    if boost is not None:
        out *= boost
    return out[0] if size is None else out


def sample_exponential(mean: float, rng: RngStream, size: int | None = None):
    """Draw from Exp(mean) via the inverse-CDF method, x = -mean*ln(1-U)."""
    if mean <= 0:
        raise ValueError(f"sample_exponential requires mean > 0, got {mean}")
    u = rng.uniform(1 if size is None else int(size))
    x = -mean * np.log1p(-u)
    return x[0] if size is None else x
