"""Correction, fusion and scoring backends."""

from __future__ import annotations

from .base import KINDS, Backend, BackendProfile, default_templates
from .live import LiveHttpBackend, parse_score, parse_transcript
from .local import HeuristicBackend, OracleBackend

__all__ = [
    "KINDS",
    "Backend",
    "BackendProfile",
    "HeuristicBackend",
    "LiveHttpBackend",
    "OracleBackend",
    "default_templates",
    "make_backend",
    "parse_score",
    "parse_transcript",
]


def make_backend(profile: BackendProfile, reference: str | None = None) -> Backend:
    """Build the backend a profile describes; the oracle needs the hidden reference."""
    if profile.kind == "oracle":
        if reference is None:
            raise ValueError("oracle backend requires a reference transcript")
        return OracleBackend(profile, reference)
    if profile.kind == "live-http":
        return LiveHttpBackend(profile)
    return HeuristicBackend(profile)
