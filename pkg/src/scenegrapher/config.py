"""Service configuration: one JSON file, environment overrides, CLI flags on top."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ValidationError

ENV_PREFIX = "SCENEGRAPHER_"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8008
    store_dir: str = "graphs"
    image_dir: str | None = None
    ui_dir: str | None = None
    vocab_attributes: str | None = None  # tsv path; None uses the builtin list
    vocab_predicates: str | None = None
    min_sep: float = 40.0
    row_height: float = 80.0
    origin_x: float = 0.0
    origin_y: float = 0.0
    compaction_interval: int = 100
    fsync: bool = True


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, kind: type, value):
    if value is None:
        return None
    try:
        if kind is bool:
            if isinstance(value, bool):
                return value
            lowered = str(value).strip().lower()
            if lowered in _BOOL_TRUE:
                return True
            if lowered in _BOOL_FALSE:
                return False
            raise ValueError(value)
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"config field {name!r}: cannot parse {value!r}") from exc


_FIELD_TYPES = {
    "host": str,
    "port": int,
    "store_dir": str,
    "image_dir": str,
    "ui_dir": str,
    "vocab_attributes": str,
    "vocab_predicates": str,
    "min_sep": float,
    "row_height": float,
    "origin_x": float,
    "origin_y": float,
    "compaction_interval": int,
    "fsync": bool,
}


def load_config(
    path: str | Path | None = None,
    env: dict | None = None,
    overrides: dict | None = None,
) -> ServiceConfig:
    """defaults < config file < SCENEGRAPHER_* environment < explicit overrides."""
    env = os.environ if env is None else env
    values: dict = {}

    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
        try:
            file_values = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config file {path}: invalid JSON: {exc.msg}") from exc
        if not isinstance(file_values, dict):
            raise ValidationError(f"config file {path}: top level must be an object")
        unknown = set(file_values) - set(_FIELD_TYPES)
        if unknown:
            raise ValidationError(f"config file {path}: unknown keys {sorted(unknown)}")
        values.update(file_values)

    for name in _FIELD_TYPES:
        env_value = env.get(ENV_PREFIX + name.upper())
        if env_value is not None:
            values[name] = env_value

    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    config = ServiceConfig()
    for f in fields(ServiceConfig):
        if f.name in values:
            setattr(config, f.name, _coerce(f.name, _FIELD_TYPES[f.name], values[f.name]))
    return config
