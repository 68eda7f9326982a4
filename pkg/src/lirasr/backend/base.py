from __future__ import annotations

import abc
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from ..errors import BackendConfigError
from ..transcript import DEFAULT_F_MAX, Candidate, Score, Transcript

KINDS = ("live-http", "oracle", "heuristic")
TEMPLATE_NAMES = ("correct", "fuse", "score")


def default_templates() -> dict[str, str]:
    root = resources.files("lirasr.backend").joinpath("prompts")
    return {name: root.joinpath(f"{name}.txt").read_text("utf-8") for name in TEMPLATE_NAMES}


@dataclass(frozen=True)
class BackendProfile:
    kind: str = "heuristic"
    endpoint_url: str | None = None
    model_name: str | None = None
    request_timeout: float = 60.0
    max_parallel_requests: int = 4
    retry_budget: int = 3
    backoff_base: float = 1.0
    f_max: float = DEFAULT_F_MAX
    api_key_env: str = "LIR_API_KEY"
    prompt_templates: dict[str, str] = field(default_factory=default_templates)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise BackendConfigError(f"unknown backend kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "live-http" and not (self.endpoint_url and self.model_name):
            raise BackendConfigError("live-http backend needs endpoint_url and model_name")
        if self.max_parallel_requests < 1:
            raise BackendConfigError("max_parallel_requests must be >= 1")
        if self.retry_budget < 0:
            raise BackendConfigError("retry_budget must be >= 0")
        missing = set(TEMPLATE_NAMES) - set(self.prompt_templates)
        if missing:
            raise BackendConfigError(f"missing prompt templates: {sorted(missing)}")


class Backend(abc.ABC):
    """Corrector, fuser and scorer. Implementations must be thread-safe."""

    def __init__(self, profile: BackendProfile):
        self.profile = profile

    @property
    def f_max(self) -> float:
        return self.profile.f_max

    @abc.abstractmethod
    def correct(self, candidate: Candidate, context: Transcript) -> Candidate:
        ...

    @abc.abstractmethod
    def fuse(self, current: Transcript, corrected: Sequence[Candidate]) -> Candidate:
        ...

    @abc.abstractmethod
    def score(self, candidate: Candidate) -> Score:
        ...

    def close(self) -> None:
        pass
