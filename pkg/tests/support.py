"""Test doubles shared by several test modules."""

from __future__ import annotations

import random
import threading

from lirasr.backend import Backend, BackendProfile
from lirasr.errors import BackendUnavailable
from lirasr.phonetics import apply_substitutions, build_table, slots
from lirasr.transcript import Candidate, Provenance, Score


class RandomScoreBackend(Backend):
    """Adversarial backend: every score is a fresh random draw, and correction
    swaps one random unit for a similar-sounding one, so pools keep offering
    new texts with arbitrary scores."""

    def __init__(self, seed: int, f_max: float = 100.0):
        super().__init__(BackendProfile(f_max=f_max, max_parallel_requests=1))
        self.rng = random.Random(seed)
        self.lock = threading.Lock()

    def correct(self, candidate, context):
        lang = candidate.language
        table = build_table(lang)
        options = [(s, sorted(table.get(s.key))) for s in slots(candidate.text, lang)]
        options = [(s, subs) for s, subs in options if subs]
        text = candidate.text
        with self.lock:
            if options and self.rng.random() < 0.8:
                slot, subs = self.rng.choice(options)
                text = apply_substitutions(text, {slot: self.rng.choice(subs)}, lang)
        return Candidate(text, lang, Provenance.CORRECTED)

    def fuse(self, current, corrected):
        with self.lock:
            pick = self.rng.choice(list(corrected))
        return Candidate(pick.text, pick.language, Provenance.FUSED)

    def score(self, candidate):
        with self.lock:
            return Score(self.rng.uniform(0, self.f_max), self.f_max, "random")


class DeadBackend(Backend):
    """Every call fails as if the endpoint were unreachable."""

    def __init__(self):
        super().__init__(BackendProfile(max_parallel_requests=1))

    def correct(self, *args):
        raise BackendUnavailable("down")

    fuse = score = correct
