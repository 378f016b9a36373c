"""Run configuration: flat key-value files with explicit unit suffixes.

All unit conversion happens here and only here; the model layer sees SI.
The file format is one `key = value` per line, `#` comments, unknown
keys rejected.  Defaults follow the reference teleoperation link:
K0 = -27 dB, d = 2 km, B = 10 MHz, N0 = -110 dBm/Hz, P_tx = 0.5 W,
T0 = 0.5 us, kappa = 1.5, psi = 3.5, D_f = 1 Mbit, f_R = 5 GHz.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import SystemParams


class ConfigError(ValueError):
    """Malformed, unknown, or out-of-range configuration input."""


@dataclass(frozen=True)
class AxisSpec:
    """A sweep axis: name:min:max:points with linear or log spacing."""

    name: str
    lo: float
    hi: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.name not in ("eps_th", "t_th"):
            raise ConfigError(f"unknown sweep axis '{self.name}' (use eps_th or t_th)")
        if self.points < 2:
            raise ConfigError("sweep axis needs at least 2 points")
        if not 0 < self.lo < self.hi:
            raise ConfigError(f"axis bounds must satisfy 0 < min < max, got {self.lo}..{self.hi}")
        if self.name == "eps_th" and self.hi >= 1:
            raise ConfigError("eps_th axis must stay below 1")
        if self.scale not in ("lin", "log"):
            raise ConfigError(f"axis scale must be lin or log, got '{self.scale}'")

    @classmethod
    def parse(cls, text: str) -> "AxisSpec":
        parts = text.split(":")
        if len(parts) != 5:
            raise ConfigError(f"axis spec must be name:min:max:points:lin|log, got '{text}'")
        name, lo, hi, points, scale = parts
        try:
            return cls(name, float(lo), float(hi), int(points), scale)
        except ValueError as exc:
            raise ConfigError(f"bad axis spec '{text}': {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    seed: int = 0
    rho_list: tuple[float, ...] = (0.95,)
    fr_ghz_list: tuple[float, ...] = (1.0, 5.0, 10.0)
    axis: AxisSpec | None = None
    eps_th: float = 0.1
    t_th_s: float = 0.4
    n_samples: int = 1_000_000
    out_path: str = "run.csv"
    make_plots: bool = False


def _positive(key: str, value: float) -> float:
    if not value > 0:
        raise ConfigError(f"{key} must be positive, got {value}")
    return value


def _parse_bool(key: str, raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"{key} must be a boolean, got '{raw}'")


# key -> (target field, converter from raw string)
_SYSTEM_KEYS = {
    "k0_db": ("k0_linear", lambda k, v: 10.0 ** (float(v) / 10.0)),
    "distance_m": ("distance_m", lambda k, v: _positive(k, float(v))),
    "bandwidth_mhz": ("bandwidth_hz", lambda k, v: _positive(k, float(v)) * 1e6),
    "noise_dbm_per_hz": ("noise_psd_w_per_hz", lambda k, v: 10.0 ** (float(v) / 10.0) * 1e-3),
    "tx_power_w": ("tx_power_w", lambda k, v: _positive(k, float(v))),
    "channel_use_us": ("channel_use_s", lambda k, v: _positive(k, float(v)) * 1e-6),
    "kappa": ("kappa", lambda k, v: _positive(k, float(v))),
    "psi": ("psi", lambda k, v: _positive(k, float(v))),
    "clock_ghz": ("clock_hz", lambda k, v: _positive(k, float(v)) * 1e9),
    "data_bits": ("data_bits", lambda k, v: _positive(k, float(v))),
    "gamma0_k0_numerator": ("k0_in_numerator", _parse_bool),
    "gamma0_override": ("gamma0_override", lambda k, v: _positive(k, float(v))),
}

_RUN_KEYS = {
    "seed": lambda k, v: int(v),
    "rho_th": lambda k, v: tuple(float(x) for x in v.split(",")),
    "fr_ghz": lambda k, v: tuple(_positive(k, float(x)) for x in v.split(",")),
    "axis": lambda k, v: AxisSpec.parse(v),
    "eps_th": lambda k, v: float(v),
    "t_th_ms": lambda k, v: _positive(k, float(v)) / 1e3,
    "n_samples": lambda k, v: int(v),
    "out": lambda k, v: v,
    "plots": _parse_bool,
}


def reference_system() -> SystemParams:
    return SystemParams(
        k0_linear=10.0 ** (-27 / 10),
        distance_m=2000.0,
        bandwidth_hz=10e6,
        noise_psd_w_per_hz=10.0 ** (-110 / 10) * 1e-3,
        tx_power_w=0.5,
        channel_use_s=0.5e-6,
        kappa=1.5,
        psi=3.5,
        clock_hz=5e9,
        data_bits=1e6,
    )


def default_config() -> RunConfig:
    return RunConfig(system=reference_system())


def parse_config(text: str) -> RunConfig:
    """Parse a key-value config document into a validated RunConfig."""
    system_updates: dict = {}
    run_updates: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got '{line}'")
        key, raw = (part.strip() for part in line.split("=", 1))
        try:
            if key in _SYSTEM_KEYS:
                target, conv = _SYSTEM_KEYS[key]
                system_updates[target] = conv(key, raw)
            elif key in _RUN_KEYS:
                run_updates[_RUN_FIELD[key]] = _RUN_KEYS[key](key, raw)
            else:
                raise ConfigError(f"unknown key '{key}'")
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for '{key}': {exc}") from None

    try:
        system = replace(reference_system(), **system_updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    cfg = RunConfig(system=system, **run_updates)
    for rho in cfg.rho_list:
        if not 0 < rho < 1:
            raise ConfigError(f"rho_th values must be in (0, 1), got {rho}")
    if not 0 < cfg.eps_th < 1:
        raise ConfigError(f"eps_th must be in (0, 1), got {cfg.eps_th}")
    if cfg.n_samples < 1:
        raise ConfigError(f"n_samples must be >= 1, got {cfg.n_samples}")
    return cfg


_RUN_FIELD = {
    "seed": "seed",
    "rho_th": "rho_list",
    "fr_ghz": "fr_ghz_list",
    "axis": "axis",
    "eps_th": "eps_th",
    "t_th_ms": "t_th_s",
    "n_samples": "n_samples",
    "out": "out_path",
    "plots": "make_plots",
}
