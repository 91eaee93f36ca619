"""Scenario configuration: a flat ``key = value`` file plus overrides."""

from __future__ import annotations

import dataclasses
import hashlib
import os
from dataclasses import dataclass
from pathlib import Path

SEED_ENV = "SRTA_SIM_SEED"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    width: int = 128
    hash_algorithm: str = "sha256"
    delta_t: int = 10
    clock_increment: int = 1
    seed: int = 0
    n_tags: int = 2
    n_readers: int = 2
    protocol: str = "srta"
    trials: int = 100
    out_dir: str = "out"
    format: str = "json"

    def __post_init__(self):
        validate(self)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def validate(cfg: ScenarioConfig) -> None:
    if cfg.width < 2 or cfg.width % 2:
        raise ConfigError("width must be an even number of bits >= 2")
    if cfg.width > 0xFFFF:
        raise ConfigError("width must fit the 16-bit wire length field")
    if cfg.hash_algorithm not in hashlib.algorithms_available:
        raise ConfigError(f"unknown hash algorithm {cfg.hash_algorithm!r}")
    if cfg.delta_t < 0 or cfg.clock_increment < 0:
        raise ConfigError("delta_t and clock_increment must be non-negative")
    if cfg.n_tags < 1 or cfg.n_readers < 1:
        raise ConfigError("population sizes must be >= 1")
    if cfg.protocol not in ("srta", "improved"):
        raise ConfigError(f"unknown protocol {cfg.protocol!r}")
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    if cfg.format not in ("json", "markdown"):
        raise ConfigError("format must be json or markdown")


_FIELDS = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
_ALIASES = {"delta-t": "delta_t", "hash": "hash_algorithm", "out": "out_dir",
            "tags": "n_tags", "readers": "n_readers", "w": "width"}


def _coerce(key: str, raw) -> object:
    key = _ALIASES.get(key, key).replace("-", "_")
    if key not in _FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    if _FIELDS[key] in (int, "int"):
        try:
            return key, int(raw, 0) if isinstance(raw, str) else int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    return key, str(raw)


def parse(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (p.strip() for p in line.split("=", 1))
        key, value = _coerce(key, raw)
        values[key] = value
    return values


def load(path=None, **overrides) -> ScenarioConfig:
    """Defaults < $SRTA_SIM_SEED < config file < explicit overrides."""
    values = {}
    env_seed = os.environ.get(SEED_ENV)
    if env_seed:
        values["seed"] = _coerce("seed", env_seed)[1]
    if path is not None:
        try:
            values.update(parse(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for key, value in overrides.items():
        if value is not None:
            k, v = _coerce(key, value)
            values[k] = v
    return ScenarioConfig(**values)
