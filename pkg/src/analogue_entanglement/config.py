"""Run configuration and unit conversion for the command-line front end.

A configuration is one JSON object whose physical fields carry their unit in
the key, e.g. ``c_in_m_per_s``.  Temperatures are given in units of
(hbar/k_B) K: a temperature of ``x`` such units is k_B T / hbar = x rad/s,
which is exactly the natural-unit value used internally.  ``temperature_K`` accepts SI kelvin
instead.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from scipy.constants import hbar, k as k_boltzmann

from .fock_oracle import DEFAULT_LEAKAGE_BOUND


class ConfigError(ValueError):
    pass


# --- units ----------------------------------------------------------------------


def natural_from_hbar_over_kB_K(value: float) -> float:
    return float(value)


def hbar_over_kB_K_from_natural(value: float) -> float:
    return float(value)


def natural_from_kelvin(value: float) -> float:
    return k_boltzmann * value / hbar


def kelvin_from_natural(value: float) -> float:
    return hbar * value / k_boltzmann


# --- config ---------------------------------------------------------------------


@dataclass(frozen=True)
class KGrid:
    k_min_per_m: float = 0.1
    k_max_per_m: float = 10.0
    count: int = 100
    scale: str = "linear"


@dataclass(frozen=True)
class ResonanceSettings:
    k_per_m: float = 1.0
    t_minus_window_s: tuple[float, float] = (0.0, 2.0 * math.pi)
    repetitions: int = 10


@dataclass(frozen=True)
class Measurement:
    n_avg: float
    omega_in_rad_per_s: float
    omega_out_rad_per_s: float


@dataclass(frozen=True)
class OracleSettings:
    r_values: tuple[float, ...] = (0.1, 0.3, 0.5, 0.8, 1.0)
    nbar_values: tuple[float, ...] = (0.0, 0.2, 0.5, 1.0)
    cutoff: int | None = None
    leakage_bound: float = DEFAULT_LEAKAGE_BOUND
    deviation_tol: float = 1e-5


@dataclass(frozen=True)
class RunConfig:
    c_in_m_per_s: float = 1.0
    c_out_m_per_s: float = 3.0
    epsilon2_m4_per_s2: float = 0.0
    dispersion_sign: str = "super"
    temperature_hbar_over_kB_K: float = 0.0
    k_grid: KGrid = field(default_factory=KGrid)
    t0_s: float = 0.0
    t1_s: float = 0.0
    t2_s: float = math.pi / 2
    output: str = "csv"
    eof_units: str = "nats"
    resonance: ResonanceSettings = field(default_factory=ResonanceSettings)
    measured: Measurement | None = None
    oracle: OracleSettings = field(default_factory=OracleSettings)

    @property
    def temperature(self) -> float:
        """Initial temperature in natural units."""
        return natural_from_hbar_over_kB_K(self.temperature_hbar_over_kB_K)

    def echo(self) -> dict[str, Any]:
        return json.loads(json.dumps(asdict(self)))


_TOP_KEYS = {f for f in RunConfig.__dataclass_fields__} | {"temperature_K"}


def _section(raw, cls, name, required=()):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError(f"'{name}' must be an object")
    unknown = set(raw) - set(cls.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {sorted(unknown)}")
    missing = [k for k in required if k not in raw]
    if missing:
        raise ConfigError(f"missing keys in '{name}': {missing}")
    try:
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in raw.items()})
    except TypeError as exc:
        raise ConfigError(f"bad '{name}': {exc}") from None


def _number(value, name, *, positive=False, nonnegative=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"'{name}' must be a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"'{name}' must be positive, got {value!r}")
    if nonnegative and value < 0:
        raise ConfigError(f"'{name}' must be nonnegative, got {value!r}")
    return float(value)


def parse_config(raw: dict[str, Any]) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    raw = dict(raw)
    if "temperature_K" in raw:
        if "temperature_hbar_over_kB_K" in raw:
            raise ConfigError("give either 'temperature_hbar_over_kB_K' or 'temperature_K', not both")
        t_k = _number(raw.pop("temperature_K"), "temperature_K", nonnegative=True)
        raw["temperature_hbar_over_kB_K"] = hbar_over_kB_K_from_natural(natural_from_kelvin(t_k))

    kwargs: dict[str, Any] = {}
    for key in ("c_in_m_per_s", "c_out_m_per_s"):
        if key in raw:
            kwargs[key] = _number(raw[key], key, positive=True)
    for key in ("epsilon2_m4_per_s2", "temperature_hbar_over_kB_K"):
        if key in raw:
            kwargs[key] = _number(raw[key], key, nonnegative=True)
    for key in ("t0_s", "t1_s", "t2_s"):
        if key in raw:
            kwargs[key] = _number(raw[key], key)
    for key, allowed in (("dispersion_sign", ("super", "sub")), ("output", ("csv", "json")), ("eof_units", ("nats", "bits"))):
        if key in raw:
            if raw[key] not in allowed:
                raise ConfigError(f"'{key}' must be one of {allowed}, got {raw[key]!r}")
            kwargs[key] = raw[key]

    if "k_grid" in raw:
        grid = _section(raw["k_grid"], KGrid, "k_grid")
        k_min = _number(grid.k_min_per_m, "k_grid.k_min_per_m", positive=True)
        k_max = _number(grid.k_max_per_m, "k_grid.k_max_per_m", positive=True)
        if k_max < k_min:
            raise ConfigError("k_grid.k_max_per_m is below k_grid.k_min_per_m")
        if isinstance(grid.count, bool) or not isinstance(grid.count, int) or grid.count < 1:
            raise ConfigError(f"k_grid.count must be an integer >= 1, got {grid.count!r}")
        if grid.scale not in ("linear", "log"):
            raise ConfigError(f"k_grid.scale must be 'linear' or 'log', got {grid.scale!r}")
        kwargs["k_grid"] = KGrid(k_min, k_max, grid.count, grid.scale)

    if "resonance" in raw:
        res = _section(raw["resonance"], ResonanceSettings, "resonance")
        k_res = _number(res.k_per_m, "resonance.k_per_m", positive=True)
        window = res.t_minus_window_s
        if len(window) != 2:
            raise ConfigError("resonance.t_minus_window_s must be [min, max]")
        lo = _number(window[0], "resonance.t_minus_window_s[0]", nonnegative=True)
        hi = _number(window[1], "resonance.t_minus_window_s[1]", positive=True)
        if not hi > lo:
            raise ConfigError("resonance.t_minus_window_s is empty")
        if isinstance(res.repetitions, bool) or not isinstance(res.repetitions, int) or res.repetitions < 1:
            raise ConfigError("resonance.repetitions must be an integer >= 1")
        kwargs["resonance"] = ResonanceSettings(k_res, (lo, hi), res.repetitions)

    if raw.get("measured") is not None:
        meas = _section(raw["measured"], Measurement, "measured", required=Measurement.__dataclass_fields__)
        kwargs["measured"] = Measurement(
            _number(meas.n_avg, "measured.n_avg", nonnegative=True),
            _number(meas.omega_in_rad_per_s, "measured.omega_in_rad_per_s", positive=True),
            _number(meas.omega_out_rad_per_s, "measured.omega_out_rad_per_s", positive=True),
        )

    if "oracle" in raw:
        orc = _section(raw["oracle"], OracleSettings, "oracle")
        if not orc.r_values or not orc.nbar_values:
            raise ConfigError("oracle.r_values and oracle.nbar_values must be nonempty")
        r_values = tuple(_number(v, "oracle.r_values[]") for v in orc.r_values)
        nbar_values = tuple(_number(v, "oracle.nbar_values[]", nonnegative=True) for v in orc.nbar_values)
        if orc.cutoff is not None and (isinstance(orc.cutoff, bool) or not isinstance(orc.cutoff, int) or orc.cutoff < 2):
            raise ConfigError("oracle.cutoff must be an integer >= 2 or null (adaptive)")
        kwargs["oracle"] = OracleSettings(
            r_values,
            nbar_values,
            orc.cutoff,
            _number(orc.leakage_bound, "oracle.leakage_bound", positive=True),
            _number(orc.deviation_tol, "oracle.deviation_tol", positive=True),
        )

    return RunConfig(**kwargs)


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return parse_config(raw)
