"""Run configuration: YAML file, environment overrides, defaults.

Secrets never live here; the LLM credential is read from the environment by
the gateway. Paths may also be overridden via ``MOTIONFORGE_BLENDER``,
``MOTIONFORGE_ASSETS``, ``MOTIONFORGE_BLENDERLIB`` and ``MOTIONFORGE_CACHE``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .llm import EndpointConfig
from .synthesis.sampler import SynthesisConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    blender_path: str = "blender"
    asset_root: str = "assets"
    cache_root: str = ".motionforge-cache"
    run_root: str = "runs"
    blenderlib_path: str | None = None
    mode: str = "dsl"  # prompt pipeline mode: "dsl" | "script"
    render_timeout_s: float = 1800.0
    external_backend_url: str | None = None
    llm: EndpointConfig | None = None
    synthesis: SynthesisConfig = field(default_factory=SynthesisConfig)

    def __post_init__(self):
        if self.mode not in ("dsl", "script"):
            raise ConfigError(f"mode must be 'dsl' or 'script', got {self.mode!r}")


def _build(cls, doc: dict, path: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"unknown config key {sorted(unknown)[0]!r} under {path or 'top level'}")
    try:
        return cls(**doc)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"invalid config under {path or 'top level'}: {e}") from e


def load_config(path: str | Path | None = None) -> RunConfig:
    doc = {}
    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
        loaded = yaml.safe_load(raw)
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must contain a mapping")
        doc = loaded

    llm_doc = doc.pop("llm", None)
    synth_doc = doc.pop("synthesis", None)
    cfg = _build(RunConfig, doc, "")
    if llm_doc is not None:
        cfg = _replace(cfg, llm=_build(EndpointConfig, llm_doc, "llm"))
    if synth_doc is not None:
        cfg = _replace(cfg, synthesis=_build(SynthesisConfig, synth_doc, "synthesis"))

    env_overrides = {
        "MOTIONFORGE_BLENDER": "blender_path",
        "MOTIONFORGE_ASSETS": "asset_root",
        "MOTIONFORGE_BLENDERLIB": "blenderlib_path",
        "MOTIONFORGE_CACHE": "cache_root",
    }
    for var, attr in env_overrides.items():
        value = os.environ.get(var)
        if value:
            cfg = _replace(cfg, **{attr: value})
    return cfg


def _replace(cfg: RunConfig, **kwargs) -> RunConfig:
    from dataclasses import replace

    return replace(cfg, **kwargs)
