"""Run the correction loop, baselines or noise injection over a corpus."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, TypeVar

from ..backend import Backend, make_backend
from ..errors import MissingReference
from ..injector import InjectedEdit, NoiseProfile, corrupt
from ..optimizer import CallStats, RunResult, run
from ..phonetics import build_table
from ..transcript import Transcript
from .baselines import baseline_direct, baseline_nbest
from .config import HarnessConfig
from .corpus import CorpusRecord, derive_seed

logger = logging.getLogger(__name__)

R = TypeVar("R")


@dataclass
class CorpusRun:
    outputs: dict[str, str]
    results: dict[str, RunResult] = field(default_factory=dict)
    stats: CallStats = field(default_factory=CallStats)

    def traces(self, timing: bool = True) -> dict[str, list[dict]]:
        return {rid: [t.to_dict(timing) for t in res.trace] for rid, res in sorted(self.results.items())}


class _BackendPool:
    """Per-record backends; everything but the oracle is shared across records."""

    def __init__(self, cfg: HarnessConfig):
        self.cfg = cfg
        self._shared: Backend | None = None
        if cfg.backend.kind != "oracle":
            self._shared = make_backend(cfg.backend)

    def for_record(self, record: CorpusRecord) -> Backend:
        if self._shared is not None:
            return self._shared
        if record.reference is None:
            raise MissingReference(f"{record.id}: oracle backend needs a reference")
        return make_backend(self.cfg.backend, record.reference)

    def close(self) -> None:
        if self._shared is not None:
            self._shared.close()


def _map_records(fn: Callable[[CorpusRecord], R], records: Sequence[CorpusRecord], workers: int) -> list[R]:
    if workers <= 1:
        return [fn(r) for r in records]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, records))


def correct_corpus(records: Sequence[CorpusRecord], cfg: HarnessConfig) -> CorpusRun:
    records = sorted(records, key=lambda r: r.id)
    backends = _BackendPool(cfg)
    for rec in records:
        backends.for_record(rec)  # fail fast on missing oracle references

    def one(rec: CorpusRecord) -> RunResult:
        table = build_table(rec.language, cfg.loop.table_threshold)
        return run(
            Transcript(rec.hypothesis, rec.language),
            backends.for_record(rec),
            cfg.loop,
            seed=derive_seed(cfg.seed, rec.id),
            table=table,
        )

    try:
        results = _map_records(one, records, cfg.workers)
    finally:
        backends.close()
    out = CorpusRun(outputs={}, results={})
    for rec, res in zip(records, results):
        out.outputs[rec.id] = res.final.text
        out.results[rec.id] = res
        out.stats.merge(res.stats)
    return out


class _CountingBackend:
    """Wraps a backend to count calls and transport failures."""

    def __init__(self, inner: Backend, stats: CallStats):
        self.inner, self.stats = inner, stats
        self.profile = inner.profile

    def __getattr__(self, name):
        attr = getattr(self.inner, name)
        if name not in ("correct", "fuse", "score"):
            return attr

        def wrapped(*args, **kwargs):
            try:
                out = attr(*args, **kwargs)
            except Exception:
                self.stats.record(False)
                raise
            self.stats.record(True)
            return out

        return wrapped


def baseline_corpus(
    records: Sequence[CorpusRecord], cfg: HarnessConfig, mode: str, n: int = 3
) -> CorpusRun:
    records = sorted(records, key=lambda r: r.id)
    backends = _BackendPool(cfg)
    run_ = CorpusRun(outputs={})

    def one(rec: CorpusRecord) -> str:
        backend = _CountingBackend(backends.for_record(rec), run_.stats)
        if mode == "direct":
            return baseline_direct(rec, backend).text
        return baseline_nbest(rec, n, backend).text

    try:
        texts = _map_records(one, records, cfg.workers)
    finally:
        backends.close()
    run_.outputs = {rec.id: text for rec, text in zip(records, texts)}
    return run_


def inject_corpus(
    records: Sequence[CorpusRecord], noise: NoiseProfile, table_threshold: float = 0.6
) -> tuple[list[CorpusRecord], dict[str, list[InjectedEdit]]]:
    """Corrupt each record's reference (or its hypothesis when no reference).

    The clean text becomes the reference and the corrupted text the
    hypothesis; n-best lists are dropped. Each record draws from its own seed
    derived from ``noise.seed`` and the record id.
    """
    out, edits = [], {}
    for rec in sorted(records, key=lambda r: r.id):
        clean = rec.reference if rec.reference is not None else rec.hypothesis
        profile = replace(noise, seed=derive_seed(noise.seed, rec.id))
        noisy, found = corrupt(Transcript(clean, rec.language), profile,
                               build_table(rec.language, table_threshold))
        out.append(CorpusRecord(rec.id, rec.language, noisy.text, clean))
        edits[rec.id] = found
    return out, edits
