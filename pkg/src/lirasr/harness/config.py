"""Single JSON config covering the loop, rules, backend and noise settings.

Every section is optional; omitted keys keep their defaults::

    {
      "seed": 0,
      "workers": 1,
      "fsm": {"max_iterations": 8, "streak_threshold": 2},
      "neighbor": {"pool_size": 3, "search_min_similarity": 0.8, ...},
      "rules": {"min_phonetic_similarity": 0.5, ...},
      "table": {"threshold": 0.6},
      "backend": {"kind": "live-http", "endpoint_url": "...", "model_name": "...",
                  "prompt_template_files": {"score": "my_score.txt"}},
      "noise": {"substitution_rate": 0.15, "homophone_bias": 0.7}
    }
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..backend import BackendProfile, default_templates
from ..injector import NoiseProfile
from ..neighbor import NeighborSettings
from ..optimizer import LoopConfig
from ..rules import RuleConfig

SECTIONS = ("seed", "workers", "fsm", "neighbor", "rules", "table", "backend", "noise")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class HarnessConfig:
    loop: LoopConfig = field(default_factory=LoopConfig)
    backend: BackendProfile = field(default_factory=BackendProfile)
    noise: NoiseProfile = field(default_factory=NoiseProfile)
    seed: int = 0
    workers: int = 1


def _build(cls: type, values: dict[str, Any], section: str):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(values) - names)
    if unknown:
        raise ConfigError(f"{section}: unknown keys {unknown}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def from_dict(data: dict[str, Any], base_dir: Path | None = None) -> HarnessConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(SECTIONS))
    if unknown:
        raise ConfigError(f"unknown config sections {unknown}")

    fsm_cfg = dict(data.get("fsm", {}))
    loop_kwargs: dict[str, Any] = {}
    for key in ("max_iterations", "streak_threshold"):
        if key in fsm_cfg:
            loop_kwargs[key] = fsm_cfg.pop(key)
    if fsm_cfg:
        raise ConfigError(f"fsm: unknown keys {sorted(fsm_cfg)}")
    table_cfg = dict(data.get("table", {}))
    if "threshold" in table_cfg:
        loop_kwargs["table_threshold"] = table_cfg.pop("threshold")
    if table_cfg:
        raise ConfigError(f"table: unknown keys {sorted(table_cfg)}")
    loop = _build(
        LoopConfig,
        dict(
            neighbor=_build(NeighborSettings, data.get("neighbor", {}), "neighbor"),
            rules=_build(RuleConfig, data.get("rules", {}), "rules"),
            **loop_kwargs,
        ),
        "fsm",
    )

    backend_cfg = dict(data.get("backend", {}))
    templates = default_templates()
    templates.update(backend_cfg.pop("prompt_templates", {}))
    for name, rel in backend_cfg.pop("prompt_template_files", {}).items():
        path = Path(rel) if base_dir is None else base_dir / rel
        try:
            templates[name] = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"backend: cannot read template {path}: {exc}") from exc
    backend_cfg["prompt_templates"] = templates
    backend = _build(BackendProfile, backend_cfg, "backend")

    return HarnessConfig(
        loop=loop,
        backend=backend,
        noise=_build(NoiseProfile, data.get("noise", {}), "noise"),
        seed=int(data.get("seed", 0)),
        workers=int(data.get("workers", 1)),
    )


def load(path: str | Path | None) -> HarnessConfig:
    if path is None:
        return HarnessConfig()
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load config {path}: {exc}") from exc
    return from_dict(data, path.parent)
