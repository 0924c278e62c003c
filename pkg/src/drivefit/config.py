"""Runtime configuration: defaults, config file, DRIVEFIT_* env overrides.

Precedence (lowest to highest): built-in defaults, config file, environment
variables, explicit overrides (CLI flags). The config file is plain text,
one ``key = value`` per line, ``#`` comments; booleans are true/false.

Keys, with their sane ranges:

    store                     store path (directory, or .json for single-file)
    rate_hz                   resample rate, [1, 100]
    window                    comparison window N, >= 1
    window_includes_recent    bool; include the recent ride in its own baseline
    fuel_base                 idle consumption L/100km, > 0
    fuel_rolling              L/100km per kph, >= 0
    fuel_drag                 L/100km per kph^2, >= 0
    fuel_accel_gain           L/100km per m/s^2
    v_eps                     stationary-ego speed floor m/s, (0, 5]
    alert_headway_s           alert-zone boundary s, > 0
    attention_headway_s       attention-zone boundary s, > alert_headway_s
    accel_hi                  comfort limit m/s^2, > 0
    accel_lo                  comfort limit m/s^2, < 0
    jerk_abs                  comfort limit m/s^3, > 0
    no_lead                   exclude | safe
    smooth_accel              bool; moving-average accel before jerk
    smooth_window             odd window length, >= 1
    host / port               service bind address
    static_dir                optional directory the service serves at /
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .metrics import FuelParams, Thresholds

ENV_PREFIX = "DRIVEFIT_"


@dataclass(frozen=True)
class AppConfig:
    store: str = "drivefit_store"
    rate_hz: float = 10.0
    window: int = 5
    window_includes_recent: bool = False
    fuel: FuelParams = field(default_factory=FuelParams)
    thresholds: Thresholds = field(default_factory=Thresholds)
    smooth_accel: bool = False
    smooth_window: int = 5
    host: str = "127.0.0.1"
    port: int = 8777
    static_dir: str | None = None

    def validate(self) -> "AppConfig":
        if not 1.0 <= self.rate_hz <= 100.0:
            raise ConfigError(f"rate_hz must be within [1, 100], got {self.rate_hz}")
        if self.window < 1:
            raise ConfigError(f"window must be >= 1, got {self.window}")
        if self.smooth_window < 1 or self.smooth_window % 2 == 0:
            raise ConfigError(f"smooth_window must be a positive odd number, got {self.smooth_window}")
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"port must be within [1, 65535], got {self.port}")
        try:
            self.fuel.validate()
            self.thresholds.validate()
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.thresholds.v_eps > 5.0:
            raise ConfigError(f"v_eps above 5 m/s would hide real tailgating, got {self.thresholds.v_eps}")
        return self


_FUEL_KEYS = {"fuel_base": "base", "fuel_rolling": "rolling", "fuel_drag": "drag", "fuel_accel_gain": "accel_gain"}
_THRESHOLD_KEYS = {
    "v_eps": "v_eps",
    "alert_headway_s": "alert_headway_s",
    "attention_headway_s": "attention_headway_s",
    "accel_hi": "accel_hi",
    "accel_lo": "accel_lo",
    "jerk_abs": "jerk_abs",
    "no_lead": "no_lead",
}
_TOP_FLOAT = {"rate_hz"}
_TOP_INT = {"window", "smooth_window", "port"}
_TOP_BOOL = {"window_includes_recent", "smooth_accel"}
_TOP_STR = {"store", "host", "static_dir"}

KNOWN_KEYS = (
    set(_FUEL_KEYS) | set(_THRESHOLD_KEYS) | _TOP_FLOAT | _TOP_INT | _TOP_BOOL | _TOP_STR
)


def load_config(
    config_path: str | Path | None = None,
    env: dict | None = None,
    overrides: dict | None = None,
) -> AppConfig:
    """Build the effective config from defaults, file, env and overrides."""
    values: dict = {}
    if config_path is not None:
        values.update(parse_config_file(config_path))
    for key, value in _env_values(os.environ if env is None else env).items():
        values[key] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return apply_values(AppConfig(), values).validate()


def apply_values(base: AppConfig, values: dict) -> AppConfig:
    fuel = base.fuel
    thresholds = base.thresholds
    top: dict = {}
    for key, raw in values.items():
        if key in _FUEL_KEYS:
            fuel = replace(fuel, **{_FUEL_KEYS[key]: _as_float(key, raw)})
        elif key == "no_lead":
            thresholds = replace(thresholds, no_lead=str(raw))
        elif key in _THRESHOLD_KEYS:
            thresholds = replace(thresholds, **{_THRESHOLD_KEYS[key]: _as_float(key, raw)})
        elif key in _TOP_FLOAT:
            top[key] = _as_float(key, raw)
        elif key in _TOP_INT:
            top[key] = _as_int(key, raw)
        elif key in _TOP_BOOL:
            top[key] = _as_bool(key, raw)
        elif key in _TOP_STR:
            top[key] = str(raw)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return replace(base, fuel=fuel, thresholds=thresholds, **top)


def parse_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _env_values(env: dict) -> dict:
    values = {}
    for key in KNOWN_KEYS:
        raw = env.get(ENV_PREFIX + key.upper())
        if raw is not None:
            values[key] = raw
    return values


def _as_float(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} needs a number, got {raw!r}") from None


def _as_int(key: str, raw) -> int:
    try:
        return int(str(raw))
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} needs an integer, got {raw!r}") from None


def _as_bool(key: str, raw) -> bool:
    if isinstance(raw, bool):
        return raw
    text = str(raw).strip().lower()
    if text in ("true", "1", "yes", "on"):
        return True
    if text in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"config key {key!r} needs true/false, got {raw!r}")
