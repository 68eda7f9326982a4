"""Corpus I/O, baselines, reports and the command line."""

from .baselines import baseline_direct, baseline_nbest
from .corpus import CorpusRecord, derive_seed, export, ingest, sample_corpus
from .report import EvalReport, convergence_export, evaluate

__all__ = [
    "CorpusRecord",
    "EvalReport",
    "baseline_direct",
    "baseline_nbest",
    "convergence_export",
    "derive_seed",
    "evaluate",
    "export",
    "ingest",
    "sample_corpus",
]
