"""Single-shot comparison methods: direct prompt and n-best fusion."""

from __future__ import annotations

import logging

from ..backend import Backend
from ..errors import BackendError, MissingNBest
from ..transcript import Candidate, Provenance, Transcript
from .corpus import CorpusRecord

logger = logging.getLogger(__name__)


def baseline_direct(record: CorpusRecord, backend: Backend) -> Transcript:
    """One correction call on the hypothesis; no search, no rules."""
    hyp = Transcript(record.hypothesis, record.language)
    try:
        return backend.correct(Candidate.of(hyp), hyp).as_transcript()
    except BackendError as exc:
        logger.warning("%s: direct correction failed, keeping hypothesis: %s", record.id, exc)
        return hyp


def baseline_nbest(record: CorpusRecord, n: int, backend: Backend) -> Transcript:
    """Fuse the top-``n`` hypotheses in one call; n=1 degenerates to direct correction."""
    if record.nbest is None:
        raise MissingNBest(f"{record.id}: record has no nbest list")
    if n < 1 or len(record.nbest) < n:
        raise MissingNBest(f"{record.id}: need {n} hypotheses, have {len(record.nbest)}")
    top = Transcript(record.nbest[0], record.language)
    try:
        if n == 1:
            return backend.correct(Candidate.of(top), top).as_transcript()
        options = [Candidate(h, record.language, Provenance.NEIGHBOR) for h in record.nbest[:n]]
        return backend.fuse(top, options).as_transcript()
    except BackendError as exc:
        logger.warning("%s: n-best fusion failed, keeping top hypothesis: %s", record.id, exc)
        return top
