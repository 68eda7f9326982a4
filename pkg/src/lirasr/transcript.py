"""Transcript, candidate and score records passed between stages."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .errors import EmptyTranscript
from .metrics import _check_language

DEFAULT_F_MAX = 100.0


class Provenance(str, Enum):
    ORIGINAL = "original"
    NEIGHBOR = "neighbor"
    CORRECTED = "corrected"
    FUSED = "fused"


@dataclass(frozen=True)
class Score:
    value: float
    f_max: float = DEFAULT_F_MAX
    rationale: str = ""

    def __post_init__(self) -> None:
        if self.f_max <= 0:
            raise ValueError("f_max must be positive")
        if not 0.0 <= self.value <= self.f_max:
            raise ValueError(f"score {self.value} outside [0, {self.f_max}]")

    @classmethod
    def clamped(cls, value: float, f_max: float = DEFAULT_F_MAX, rationale: str = "") -> Score:
        return cls(min(max(float(value), 0.0), f_max), f_max, rationale)

    def to_dict(self) -> dict:
        return {"value": self.value, "f_max": self.f_max, "rationale": self.rationale}


@dataclass(frozen=True)
class Transcript:
    text: str
    language: str

    def __post_init__(self) -> None:
        _check_language(self.language)

    def require_text(self) -> Transcript:
        if not self.text.strip():
            raise EmptyTranscript("transcript is empty")
        return self


@dataclass(frozen=True)
class Candidate:
    text: str
    language: str
    provenance: Provenance = Provenance.ORIGINAL
    score: Score | None = None
    rationale: str | None = None

    @classmethod
    def of(cls, transcript: Transcript, provenance: Provenance = Provenance.ORIGINAL) -> Candidate:
        return cls(transcript.text, transcript.language, provenance)

    def as_transcript(self) -> Transcript:
        return Transcript(self.text, self.language)

    def with_score(self, score: Score) -> Candidate:
        return replace(self, score=score, rationale=score.rationale or self.rationale)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "language": self.language,
            "provenance": self.provenance.value,
            "score": None if self.score is None else self.score.value,
            "rationale": self.rationale,
        }
