"""Application configuration.

Values resolve in order CLI flag > ``XAR_<FIELD>`` environment variable >
JSON config file > built-in default.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from .embedder import BackendMode, EmbedConfig
from .errors import InputError
from .path_monitor import MonitorConfig
from .perception import DEFAULT_CAPTION_PROMPT, CaptionBackendConfig
from .rag import DEFAULT_TEMPLATE, LLMConfig, RagConfig
from .session import Level

ENV_PREFIX = "XAR_"


class ConfigError(InputError):
    pass


@dataclass(frozen=True)
class AppConfig:
    store_path: str = "xar_store.json"
    backend: str = "fake"
    # per-component overrides of ``backend``
    embed_backend: Optional[str] = None
    caption_backend: Optional[str] = None
    llm_backend: Optional[str] = None
    embed_url: Optional[str] = None
    vlm_url: Optional[str] = None
    llm_url: Optional[str] = None
    embed_timeout: float = 30.0
    caption_timeout: float = 30.0
    llm_timeout: float = 60.0
    caption_model: Optional[str] = None
    llm_model: Optional[str] = None
    caption_prompt: str = DEFAULT_CAPTION_PROMPT
    ratio_threshold: float = 1.2
    min_abs_increase: float = 0.25
    sync_tolerance: float = 0.5
    k: int = 5
    template: str = DEFAULT_TEMPLATE
    min_level: str = "DEBUG"
    host: str = "127.0.0.1"
    port: int = 8080

    def _mode(self, override: Optional[str]) -> BackendMode:
        return BackendMode.parse(override or self.backend)

    def embed_config(self) -> EmbedConfig:
        return EmbedConfig(self._mode(self.embed_backend), self.embed_url, self.embed_timeout)

    def caption_config(self) -> CaptionBackendConfig:
        return CaptionBackendConfig(
            self._mode(self.caption_backend), self.vlm_url, self.caption_timeout, self.caption_model, self.caption_prompt
        )

    def llm_config(self) -> LLMConfig:
        return LLMConfig(self._mode(self.llm_backend), self.llm_url, self.llm_timeout, self.llm_model)

    def monitor_config(self) -> MonitorConfig:
        return MonitorConfig(self.ratio_threshold, self.min_abs_increase, self.sync_tolerance)

    def rag_config(self, k: Optional[int] = None) -> RagConfig:
        return RagConfig(k if k is not None else self.k, self.template, Level.parse(self.min_level), self.llm_config())

    def validate(self) -> "AppConfig":
        try:
            self.embed_config()
            self.caption_config()
            self.monitor_config()
            self.rag_config()
        except ValueError as exc:
            raise ConfigError(f"invalid configuration: {exc}") from None
        if not 0 <= self.port <= 65535:
            raise ConfigError(f"invalid port {self.port}")
        return self


_FIELDS = {f.name: f for f in dataclasses.fields(AppConfig)}
_DEFAULTS = AppConfig()


def _coerce(name: str, value: Any) -> Any:
    default = getattr(_DEFAULTS, name)
    if value is None:
        return None
    try:
        if isinstance(default, bool):
            raise TypeError
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if isinstance(default, float):
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: cannot interpret {value!r}") from None
    if not isinstance(value, str):
        raise ConfigError(f"{name}: expected a string, got {value!r}")
    return value


def load_config(
    path: Optional[str] = None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> AppConfig:
    env = os.environ if env is None else env
    values: dict[str, Any] = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        except ValueError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - set(_FIELDS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update(data)
    for name in _FIELDS:
        key = ENV_PREFIX + name.upper()
        if key in env:
            values[name] = env[key]
    for name, value in (overrides or {}).items():
        if value is not None:
            values[name] = value
    return AppConfig(**{name: _coerce(name, v) for name, v in values.items()}).validate()
