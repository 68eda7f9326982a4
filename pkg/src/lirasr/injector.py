"""Synthetic, phonetically plausible ASR-style errors for desk experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import EmptyTranscript
from .phonetics import SubstitutionTable, apply_substitutions, slots, weighted_similar_units
from .transcript import Transcript


@dataclass(frozen=True)
class NoiseProfile:
    substitution_rate: float = 0.15
    homophone_bias: float = 0.7
    seed: int = 0
    # Stress-test only: the loop never inserts or deletes units, so these
    # errors are outside its repair space.
    indel_rate: float = 0.0

    def __post_init__(self) -> None:
        for name in ("substitution_rate", "homophone_bias", "indel_rate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class InjectedEdit:
    position: int  # unit index in the clean transcript
    kind: str  # "substitution" | "deletion" | "insertion"
    original: str
    replacement: str

    def to_dict(self) -> dict:
        return {"position": self.position, "kind": self.kind,
                "original": self.original, "replacement": self.replacement}


def corrupt(
    clean: Transcript, profile: NoiseProfile, table: SubstitutionTable
) -> tuple[Transcript, list[InjectedEdit]]:
    """Replace each substitutable unit with probability ``substitution_rate``.

    A replacement comes from the unit's exact homophones with probability
    ``homophone_bias`` and from its whole similarity set otherwise; when the
    preferred pool is empty the other one is used.
    """
    if not clean.text.strip():
        raise EmptyTranscript("cannot corrupt an empty transcript")
    lang = clean.language
    rng = random.Random(profile.seed)
    found = slots(clean.text, lang)
    subs = {}
    edits: list[InjectedEdit] = []
    for pos, slot in enumerate(found):
        options = weighted_similar_units(slot.key, lang, table, table.threshold)
        if not options:
            continue
        if rng.random() >= profile.substitution_rate:
            continue
        homophones = [u for u, w in options if w >= 1.0]
        broader = [u for u, _ in options]
        pool = homophones if rng.random() < profile.homophone_bias else broader
        choice = rng.choice(pool or broader)
        subs[slot] = choice
        edits.append(InjectedEdit(pos, "substitution", slot.key, choice))
    text = apply_substitutions(clean.text, subs, lang)
    if profile.indel_rate > 0:
        text, extra = _indels(text, lang, profile, rng)
        edits.extend(extra)
    return Transcript(text, lang), edits


def _indels(text: str, lang: str, profile: NoiseProfile, rng: random.Random):
    found = slots(text, lang)
    edits = []
    pieces, last = [], 0
    for pos, slot in enumerate(found):
        if rng.random() >= profile.indel_rate:
            continue
        pieces.append(text[last : slot.start])
        if rng.random() < 0.5:
            edits.append(InjectedEdit(pos, "deletion", slot.key, ""))
        else:
            sep = " " if lang == "en" else ""
            pieces.append(text[slot.start : slot.end] + sep + slot.key)
            edits.append(InjectedEdit(pos, "insertion", "", slot.key))
        last = slot.end
    pieces.append(text[last:])
    return "".join(pieces), edits
