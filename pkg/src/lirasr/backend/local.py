"""Deterministic offline backends.

``OracleBackend`` knows the reference transcript and is what makes the loop
testable without a model. ``HeuristicBackend`` needs nothing: correction is
the identity and scores come from lexicon coverage.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import EmptyTranscript
from ..metrics import align, cer, cer_counts, char_tokens, normalize
from ..phonetics import (
    apply_substitutions,
    en_lexicon,
    segment,
    slots,
    unit_similarity,
    units,
    zh_lexicon,
)
from ..transcript import Candidate, Provenance, Score, Transcript
from .base import Backend, BackendProfile

ORACLE_MIN_SIMILARITY = 0.5


def _require(candidate: Candidate) -> None:
    if not candidate.text.strip():
        raise EmptyTranscript("candidate is empty")


def _single(corrected: Sequence[Candidate]) -> Candidate | None:
    if not corrected:
        raise ValueError("fuse needs at least one corrected candidate")
    if len(corrected) == 1:
        return Candidate(corrected[0].text, corrected[0].language, Provenance.FUSED)
    return None


class OracleBackend(Backend):
    """Backend that peeks at the hidden reference."""

    def __init__(self, profile: BackendProfile, reference: str):
        super().__init__(profile)
        if not reference.strip():
            raise ValueError("oracle backend needs a non-empty reference")
        self.reference = reference

    def correct(self, candidate: Candidate, context: Transcript) -> Candidate:
        _require(candidate)
        lang = candidate.language
        hyp_slots = slots(candidate.text, lang)
        ref_units = units(self.reference, lang)
        edits = {}
        for code, i, j in align(ref_units, [s.key for s in hyp_slots]):
            if code != "S":
                continue
            slot, target = hyp_slots[j], ref_units[i]
            if unit_similarity(slot.key, target, lang) >= ORACLE_MIN_SIMILARITY:
                edits[slot] = target
        text = apply_substitutions(candidate.text, edits, lang)
        return Candidate(text, lang, Provenance.CORRECTED)

    def fuse(self, current: Transcript, corrected: Sequence[Candidate]) -> Candidate:
        single = _single(corrected)
        if single is not None:
            return single
        best = min(
            corrected,
            key=lambda c: cer_counts(self.reference, c.text, c.language).errors,
        )
        return Candidate(best.text, best.language, Provenance.FUSED)

    def score(self, candidate: Candidate) -> Score:
        _require(candidate)
        rate = min(cer(self.reference, candidate.text, candidate.language), 1.0)
        return Score(self.f_max * (1.0 - rate), self.f_max, f"oracle CER {rate:.4f}")


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def lexicon_coverage(text: str, language: str) -> float:
    """Share of units backed by the bundled lexicon.

    en: words present in the pronunciation lexicon. zh: characters covered by
    multi-character lexicon words after segmentation, since nearly every
    single character is listed on its own.
    """
    if language == "en":
        words = normalize(text, "en").split()
        if not words:
            return 0.0
        lex = en_lexicon()
        return sum(w in lex for w in words) / len(words)
    tokens = segment(normalize(text, "zh"))
    total = sum(len(t) for t in tokens)
    if not total:
        return 0.0
    lex = zh_lexicon()
    return sum(len(t) for t in tokens if len(t) > 1 and t in lex) / total


class HeuristicBackend(Backend):
    def correct(self, candidate: Candidate, context: Transcript) -> Candidate:
        _require(candidate)
        return Candidate(candidate.text, candidate.language, Provenance.CORRECTED)

    def fuse(self, current: Transcript, corrected: Sequence[Candidate]) -> Candidate:
        single = _single(corrected)
        if single is not None:
            return single
        base = char_tokens(current.text, current.language)
        best = max(corrected, key=lambda c: lcs_length(base, char_tokens(c.text, c.language)))
        return Candidate(best.text, best.language, Provenance.FUSED)

    def score(self, candidate: Candidate) -> Score:
        _require(candidate)
        coverage = lexicon_coverage(candidate.text, candidate.language)
        return Score(self.f_max * coverage, self.f_max, f"lexicon coverage {coverage:.4f}")
