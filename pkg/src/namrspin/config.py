"""Run configuration files.

Files hold cyclic frequencies in Hz; :func:`load_config` converts them to
angular frequencies so the rest of the package never sees Hz.
"""

from __future__ import annotations

import difflib
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from namrspin.chain_model import ResonatorSpec
from namrspin.errors import ConfigError, NamrError

TWO_PI = 2.0 * math.pi

REQUIRED_KEYS = ("n", "omega_r_hz", "g_hz", "lambda_hz", "delta_max", "seed", "t_g_seconds", "trials")
OPTIONAL_KEYS = ("output",)


@dataclass(frozen=True)
class RunConfig:
    spec: ResonatorSpec
    t_g: float
    trials: int
    seed: int
    output: str | None = None


def default_config_path() -> Path:
    return Path(str(resources.files("namrspin") / "data" / "default_config.json"))


def _number(raw: dict, key: str, kind=float):
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {value!r}", key)
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{key!r} must be an integer, got {value!r}", key)
        return int(value)
    if not math.isfinite(value):
        raise ConfigError(f"{key!r} must be finite", key)
    return float(value)


def parse_config(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    for key in raw:
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            close = difflib.get_close_matches(key, REQUIRED_KEYS + OPTIONAL_KEYS, n=1)
            hint = f"; did you mean {close[0]!r}?" if close else ""
            raise ConfigError(f"unknown key {key!r}{hint}", key)
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}", key)

    seed = _number(raw, "seed", int)
    if seed < 0:
        raise ConfigError("'seed' must be a non-negative integer", "seed")
    trials = _number(raw, "trials", int)
    if trials < 1:
        raise ConfigError("'trials' must be >= 1", "trials")
    t_g = _number(raw, "t_g_seconds")
    if t_g <= 0:
        raise ConfigError("'t_g_seconds' must be positive", "t_g_seconds")
    omega_r_hz = _number(raw, "omega_r_hz")
    if omega_r_hz <= 0:
        raise ConfigError("'omega_r_hz' must be positive", "omega_r_hz")
    try:
        spec = ResonatorSpec(
            n=_number(raw, "n", int),
            omega_r=TWO_PI * omega_r_hz,
            g=TWO_PI * _number(raw, "g_hz"),
            lambda_bar=TWO_PI * _number(raw, "lambda_hz"),
            delta_max=_number(raw, "delta_max"),
        )
    except NamrError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    output = raw.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("'output' must be a path string", "output")
    return RunConfig(spec, t_g, trials, seed, output)


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(raw)
