"""The refining loop: generate, correct, fuse, filter, score, accept.

Each iteration builds the pool {corrected neighbors, current, fused}, drops
candidates that break the rule constraints, scores the rest and moves to the
best one only if it scores at least as well as the current transcript. Ties
keep the current transcript. The controller state picks how aggressive the
next neighbor search is and when to stop.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

from . import fsm
from .backend import Backend
from .errors import BackendError
from .fsm import FsmSnapshot, StepEvent
from .neighbor import NeighborSettings, generate
from .phonetics import SubstitutionTable, build_table
from .rules import RuleConfig, check
from .transcript import Candidate, Provenance, Score, Transcript

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class LoopConfig:
    neighbor: NeighborSettings = field(default_factory=NeighborSettings)
    rules: RuleConfig = field(default_factory=RuleConfig)
    max_iterations: int = fsm.DEFAULT_MAX_ITERATIONS
    streak_threshold: int = fsm.DEFAULT_STREAK_THRESHOLD
    table_threshold: float = 0.6

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.streak_threshold < 1:
            raise ValueError("max_iterations and streak_threshold must be >= 1")
        if not 0.0 <= self.table_threshold <= 1.0:
            raise ValueError("table_threshold must lie in [0, 1]")


@dataclass
class CallStats:
    calls: int = 0
    failures: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def record(self, ok: bool) -> None:
        with self._lock:
            self.calls += 1
            self.failures += not ok

    def merge(self, other: CallStats) -> None:
        with self._lock:
            self.calls += other.calls
            self.failures += other.failures

    @property
    def total_outage(self) -> bool:
        return self.calls > 0 and self.failures == self.calls


@dataclass(frozen=True)
class PoolEntry:
    candidate: Candidate
    accepted_by_rules: bool
    violations: tuple[dict, ...] = ()

    def to_dict(self) -> dict:
        d = self.candidate.to_dict()
        d["accepted_by_rules"] = self.accepted_by_rules
        d["violations"] = list(self.violations)
        return d


@dataclass(frozen=True)
class IterationTrace:
    iteration: int
    fsm_before: FsmSnapshot
    fsm_after: FsmSnapshot
    generated: int
    surviving_after_rules: int
    pool: tuple[PoolEntry, ...]
    best_candidate: Candidate
    accepted: Transcript
    accepted_score: Score
    event: StepEvent
    wall_time: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "iteration": self.iteration,
            "fsm_before": self.fsm_before.to_dict(),
            "fsm_after": self.fsm_after.to_dict(),
            "generated": self.generated,
            "surviving_after_rules": self.surviving_after_rules,
            "pool": [p.to_dict() for p in self.pool],
            "best_candidate": self.best_candidate.to_dict(),
            "accepted": self.accepted.text,
            "language": self.accepted.language,
            "accepted_score": self.accepted_score.value,
            "event": self.event.value,
        }
        if timing:
            d["wall_time"] = round(self.wall_time, 6)
        return d


@dataclass
class RunResult:
    final: Transcript
    initial_score: Score
    trace: list[IterationTrace]
    stats: CallStats

    @property
    def scores(self) -> list[float]:
        return [self.initial_score.value] + [t.accepted_score.value for t in self.trace]


def _fan_out(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def accept(current: Candidate, survivors: Sequence[Candidate]) -> tuple[Candidate, StepEvent]:
    """Greedy acceptance: move to the top-scoring survivor if it beats ``current``.

    Equal scores keep ``current``; among equal-best survivors the earliest wins.
    Survivors without a score are ignored.
    """
    if current.score is None:
        raise ValueError("current candidate must carry a score")
    best = None
    for cand in survivors:
        if cand.score is None:
            continue
        if best is None or cand.score.value > best.score.value:
            best = cand
    if best is None or best.score.value <= current.score.value or best.text == current.text:
        return current, StepEvent.NOTHING_CHANGED
    return best, StepEvent.CHANGED


class _Guarded:
    """Backend calls that degrade instead of raising."""

    def __init__(self, backend: Backend, stats: CallStats):
        self.backend = backend
        self.stats = stats

    def _call(self, fn: Callable[[], R]) -> R | None:
        try:
            out = fn()
        except BackendError as exc:
            logger.warning("backend call failed: %s", exc)
            self.stats.record(False)
            return None
        self.stats.record(True)
        return out

    def correct(self, cand: Candidate, context: Transcript) -> Candidate:
        fixed = self._call(lambda: self.backend.correct(cand, context))
        return cand if fixed is None else fixed

    def fuse(self, current: Transcript, corrected: Sequence[Candidate]) -> Candidate | None:
        return self._call(lambda: self.backend.fuse(current, corrected))

    def score(self, cand: Candidate) -> Score | None:
        return self._call(lambda: self.backend.score(cand))


def run(
    initial: Transcript,
    backend: Backend,
    config: LoopConfig = LoopConfig(),
    seed: int = 0,
    table: SubstitutionTable | None = None,
) -> RunResult:
    initial.require_text()
    lang = initial.language
    table = table or build_table(lang, config.table_threshold)
    stats = CallStats()
    calls = _Guarded(backend, stats)
    workers = backend.profile.max_parallel_requests

    current = Candidate.of(initial)
    first = calls.score(current)
    initial_score = first if first is not None else Score(0.0, backend.f_max, "unscored")
    current = current.with_score(initial_score)

    snap = fsm.initial(config.max_iterations, config.streak_threshold)
    trace: list[IterationTrace] = []
    while not snap.done:
        started = time.perf_counter()
        t = snap.iteration
        origin = current.as_transcript()

        policy = config.neighbor.policy(snap.state, seed ^ t)
        neighbors = generate(origin, policy, table)
        corrected = _fan_out(lambda c: calls.correct(c, origin), list(neighbors.members), workers)
        fused = calls.fuse(origin, corrected) if len(corrected) > 1 else None

        # S' = corrected neighbors, current, fused; one entry per text, and the
        # current text always maps to the current candidate with its score.
        members: list[Candidate] = []
        seen: set[str] = set()
        for cand in [*corrected, current, *([fused] if fused else [])]:
            if cand.text == current.text:
                cand = current
            if cand.text in seen or not cand.text.strip():
                continue
            seen.add(cand.text)
            members.append(cand)

        entries: list[PoolEntry] = []
        survivors: list[Candidate] = []
        for cand in members:
            if cand is current:
                entries.append(PoolEntry(cand, True))
                survivors.append(cand)
                continue
            verdict = check(origin, cand, config.rules)
            entries.append(PoolEntry(cand, verdict.accepted, tuple(v.to_dict() for v in verdict.violations)))
            if verdict.accepted:
                survivors.append(cand)

        to_score = [c for c in survivors if c is not current]
        scores = _fan_out(calls.score, to_score, workers)
        scored = {c.text: c.with_score(s) for c, s in zip(to_score, scores) if s is not None}
        survivors = [current if c is current else scored.get(c.text, c) for c in survivors]
        entries = [PoolEntry(scored.get(e.candidate.text, e.candidate), e.accepted_by_rules, e.violations)
                   if e.candidate is not current else e for e in entries]

        nxt, event = accept(current, survivors)
        after = fsm.step(snap, event)
        ranked = [c for c in survivors if c.score is not None]
        best = max(ranked, key=lambda c: c.score.value) if ranked else current
        trace.append(
            IterationTrace(
                iteration=t + 1,
                fsm_before=snap,
                fsm_after=after,
                generated=len(neighbors),
                surviving_after_rules=len(survivors),
                pool=tuple(entries),
                best_candidate=best,
                accepted=nxt.as_transcript(),
                accepted_score=nxt.score,
                event=event,
                wall_time=time.perf_counter() - started,
            )
        )
        if event is StepEvent.CHANGED:
            current = Candidate(nxt.text, lang, Provenance.ORIGINAL, nxt.score, nxt.rationale)
        snap = after

    return RunResult(current.as_transcript(), initial_score, trace, stats)


def converged(result: RunResult) -> bool:
    """No rule-surviving member of the last pool outscored the final transcript."""
    if not result.trace:
        return True
    last = result.trace[-1]
    return all(
        e.candidate.score is None or e.candidate.score.value <= last.accepted_score.value
        for e in last.pool
        if e.accepted_by_rules
    )
