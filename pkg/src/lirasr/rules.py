"""Rule constraints that drop unreliable candidates.

Two families of checks run against the current transcript: phonetic
consistency of every substituted unit, and length/structure consistency
(overall length drift and the share of inserted or deleted units).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import LanguageMismatch
from .metrics import align
from .neighbor import CandidateSet
from .phonetics import UNK, g2p, unit_similarity, units
from .transcript import Candidate, Transcript

PHONETIC = "phonetic_consistency"
LENGTH = "length_deviation"
INDEL = "insertion_deletion"
UNKNOWN_SIMILARITY = 0.5


@dataclass(frozen=True)
class RuleConfig:
    min_phonetic_similarity: float = 0.5
    max_length_deviation_ratio: float = 0.2
    max_insertion_plus_deletion_ratio: float = 0.15

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_phonetic_similarity <= 1.0:
            raise ValueError("min_phonetic_similarity must lie in [0, 1]")
        if self.max_length_deviation_ratio < 0 or self.max_insertion_plus_deletion_ratio < 0:
            raise ValueError("ratio thresholds must be non-negative")


@dataclass(frozen=True)
class Violation:
    rule: str
    measured: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {"rule": self.rule, "measured": self.measured,
                "threshold": self.threshold, "detail": self.detail}


@dataclass(frozen=True)
class RuleVerdict:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def accepted(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "violations": [v.to_dict() for v in self.violations]}


def _pair_similarity(a: str, b: str, language: str) -> float:
    if UNK in g2p(a, language).tokens and UNK in g2p(b, language).tokens:
        return UNKNOWN_SIMILARITY
    return unit_similarity(a, b, language)


def check(origin: Transcript, candidate: Candidate, config: RuleConfig = RuleConfig()) -> RuleVerdict:
    if origin.language != candidate.language:
        raise LanguageMismatch(f"{origin.language} vs {candidate.language}")
    lang = origin.language
    ref, hyp = units(origin.text, lang), units(candidate.text, lang)
    ops = align(ref, hyp)
    violations = []

    worst, worst_pair = 1.0, ""
    for code, i, j in ops:
        if code == "S":
            sim = _pair_similarity(ref[i], hyp[j], lang)
            if sim < worst:
                worst, worst_pair = sim, f"{ref[i]}->{hyp[j]}"
    if worst < config.min_phonetic_similarity:
        violations.append(Violation(PHONETIC, worst, config.min_phonetic_similarity, worst_pair))

    n = len(ref)
    indel = sum(1 for code, _, _ in ops if code in "DI")
    if n == 0:
        deviation = ratio = 0.0 if not hyp else float("inf")
    else:
        deviation = abs(len(hyp) - n) / n
        ratio = indel / n
    if deviation > config.max_length_deviation_ratio:
        violations.append(Violation(LENGTH, deviation, config.max_length_deviation_ratio))
    if ratio > config.max_insertion_plus_deletion_ratio:
        violations.append(Violation(INDEL, ratio, config.max_insertion_plus_deletion_ratio))
    return RuleVerdict(tuple(violations))


def filter_candidates(
    origin: Transcript, candidates: CandidateSet | Iterable[Candidate], config: RuleConfig = RuleConfig()
) -> CandidateSet | list[Candidate]:
    """Keep the candidates that pass every rule, in their original order."""
    members = candidates.members if isinstance(candidates, CandidateSet) else tuple(candidates)
    kept = [c for c in members if c.text == origin.text or check(origin, c, config).accepted]
    if isinstance(candidates, CandidateSet):
        return CandidateSet(tuple(kept), candidates.origin, candidates.pool_size)
    return kept


filter = filter_candidates  # noqa: A001
