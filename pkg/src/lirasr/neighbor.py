"""Neighbor generation: phonetically plausible variants of a transcript.

How far the search reaches depends on the controller state. No Search returns
the origin alone; Search swaps exactly one unit for a close homophone;
Search++ swaps up to ``max_edits`` units under a looser similarity threshold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import EmptyTranscript
from .fsm import SearchState
from .phonetics import Slot, SubstitutionTable, apply_substitutions, similar_units, slots
from .transcript import Candidate, Provenance, Transcript

RETRY_FACTOR = 10


@dataclass(frozen=True)
class NeighborSettings:
    """Per-state aggressiveness; the values the controller maps each state to."""

    pool_size: int = 3
    search_max_edits: int = 1
    search_min_similarity: float = 0.8
    plus_max_edits: int = 2
    plus_min_similarity: float = 0.6

    def __post_init__(self) -> None:
        # Build both policies once so bad values fail at load time.
        self.policy(SearchState.SEARCH, 0)
        self.policy(SearchState.SEARCH_PLUS_PLUS, 0)

    def policy(self, state: SearchState, seed: int) -> NeighborPolicy:
        if state is SearchState.SEARCH:
            return NeighborPolicy(state, self.pool_size, self.search_max_edits,
                                  self.search_min_similarity, seed)
        if state is SearchState.SEARCH_PLUS_PLUS:
            return NeighborPolicy(state, self.pool_size, self.plus_max_edits,
                                  self.plus_min_similarity, seed)
        return NeighborPolicy(SearchState.NO_SEARCH, self.pool_size, 0, 1.0, seed)


@dataclass(frozen=True)
class NeighborPolicy:
    state: SearchState
    pool_size: int = 3
    max_edits_per_candidate: int = 0
    substitution_min_similarity: float = 1.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.pool_size < 1:
            raise ValueError("pool_size must be >= 1")
        if self.max_edits_per_candidate < 0:
            raise ValueError("max_edits_per_candidate must be >= 0")
        if self.state is SearchState.NO_SEARCH and self.max_edits_per_candidate != 0:
            raise ValueError("NoSearch policy must not allow edits")
        if not 0.0 <= self.substitution_min_similarity <= 1.0:
            raise ValueError("substitution_min_similarity must lie in [0, 1]")


@dataclass(frozen=True)
class CandidateSet:
    members: tuple[Candidate, ...]
    origin: Transcript
    pool_size: int = field(default=3, compare=False)

    def __post_init__(self) -> None:
        texts = [m.text for m in self.members]
        if len(set(texts)) != len(texts):
            raise ValueError("duplicate candidate texts")
        if any(m.language != self.origin.language for m in self.members):
            raise ValueError("candidate language differs from origin")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def texts(self) -> list[str]:
        return [m.text for m in self.members]


def generate(origin: Transcript, policy: NeighborPolicy, table: SubstitutionTable) -> CandidateSet:
    if not origin.text.strip():
        raise EmptyTranscript("cannot generate neighbors of an empty transcript")
    only_origin = CandidateSet((Candidate.of(origin),), origin, policy.pool_size)
    if policy.state is SearchState.NO_SEARCH or policy.max_edits_per_candidate == 0:
        return only_origin

    lang = origin.language
    options: list[tuple[Slot, list[str]]] = []
    for slot in slots(origin.text, lang):
        subs = similar_units(slot.key, lang, table, policy.substitution_min_similarity)
        if subs:
            options.append((slot, subs))
    if not options:
        return only_origin

    rng = random.Random(policy.rng_seed)
    seen = {origin.text}
    members: list[Candidate] = []
    for _ in range(RETRY_FACTOR * policy.pool_size):
        if len(members) >= policy.pool_size:
            break
        budget = min(policy.max_edits_per_candidate, len(options))
        k = budget if policy.state is SearchState.SEARCH else rng.randint(1, budget)
        picks = rng.sample(range(len(options)), k)
        edits = {options[i][0]: rng.choice(options[i][1]) for i in sorted(picks)}
        text = apply_substitutions(origin.text, edits, lang)
        if text in seen:
            continue
        seen.add(text)
        members.append(Candidate(text, lang, Provenance.NEIGHBOR))
    if not members:
        return only_origin
    return CandidateSet(tuple(members), origin, policy.pool_size)
