"""Engine configuration from a key=value file, ``DISCO_*`` env vars and flags."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from disco.agent import AgentConfig, read_registry_list
from disco.cache import DEFAULT_TTL
from disco.matcher import DEFAULT_THRESHOLD, SynonymTable

ENV_PREFIX = "DISCO_"
DEFAULT_CONFIG = "disco.conf"


class ConfigError(ValueError):
    pass


@dataclass
class EngineConfig:
    registries: list[str] = field(default_factory=list)
    registry_file: str = ""
    synonyms: str = ""
    ttl: float = DEFAULT_TTL
    threshold: float = DEFAULT_THRESHOLD
    format: str = "table"
    per_registry_deadline: float = 2.0
    overall_deadline: float = 5.0
    cache_file: str = ""

    def all_registries(self) -> list[str]:
        endpoints = list(self.registries)
        if self.registry_file:
            endpoints += read_registry_list(self.registry_file)
        return list(dict.fromkeys(endpoints))

    def agent_config(self) -> AgentConfig:
        return AgentConfig(self.all_registries(), self.per_registry_deadline, self.overall_deadline)

    def synonym_table(self) -> SynonymTable:
        return SynonymTable.load(self.synonyms) if self.synonyms else SynonymTable()

    def validate(self) -> None:
        for path in (self.registry_file, self.synonyms):
            if path and not os.access(path, os.R_OK):
                raise ConfigError(f"cannot read {path}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError("threshold must lie in [0, 1]")
        if self.ttl <= 0:
            raise ConfigError("ttl must be positive")
        if self.format not in ("table", "records"):
            raise ConfigError(f"unknown format {self.format!r}")

    def update(self, values: dict[str, str]) -> None:
        """Apply string values (from a file or the environment)."""
        types = {f.name: f.type for f in fields(self)}
        for key, raw in values.items():
            key = key.strip().lower().replace("-", "_")
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            raw = raw.strip()
            if key == "registries":
                value = [r.strip() for r in raw.split(",") if r.strip()]
            elif types[key] == "float":
                try:
                    value = float(raw)
                except ValueError:
                    raise ConfigError(f"{key} must be a number, got {raw!r}") from None
            else:
                value = raw
            setattr(self, key, value)


def parse_config_file(path) -> dict[str, str]:
    values = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value
    return values


def load_config(path=None, environ=None) -> EngineConfig:
    """Defaults, then the config file, then ``DISCO_*`` environment variables."""
    environ = os.environ if environ is None else environ
    cfg = EngineConfig()
    path = path or environ.get(ENV_PREFIX + "CONFIG")
    if path is None and Path(DEFAULT_CONFIG).exists():
        path = DEFAULT_CONFIG
    if path:
        cfg.update(parse_config_file(path))
    known = {f.name for f in fields(EngineConfig)}
    cfg.update({k[len(ENV_PREFIX):].lower(): v for k, v in environ.items()
                if k.startswith(ENV_PREFIX) and k[len(ENV_PREFIX):].lower() in known})
    return cfg
