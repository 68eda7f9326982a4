"""JSONL corpus records: one object per line.

    {"id": "zh-001", "language": "zh", "reference": "...", "hypothesis": "...",
     "nbest": ["...", "..."]}

``reference`` and ``nbest`` are optional.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from ..errors import IoFailure, SchemaViolation
from ..metrics import LANGUAGES

FIELDS = ("id", "language", "reference", "hypothesis", "nbest")


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    language: str
    hypothesis: str
    reference: str | None = None
    nbest: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        d: dict = {"id": self.id, "language": self.language}
        if self.reference is not None:
            d["reference"] = self.reference
        d["hypothesis"] = self.hypothesis
        if self.nbest is not None:
            d["nbest"] = list(self.nbest)
        return d


def _validate(obj: object, line: int) -> CorpusRecord:
    if not isinstance(obj, dict):
        raise SchemaViolation(line, "<record>", "expected a JSON object")
    unknown = sorted(set(obj) - set(FIELDS))
    if unknown:
        raise SchemaViolation(line, unknown[0], "unknown field")
    for name in ("id", "language", "hypothesis"):
        if name not in obj:
            raise SchemaViolation(line, name, "missing required field")
    rid, lang, hyp = obj["id"], obj["language"], obj["hypothesis"]
    if not isinstance(rid, str) or not rid:
        raise SchemaViolation(line, "id", "must be a non-empty string")
    if lang not in LANGUAGES:
        raise SchemaViolation(line, "language", f"must be one of {LANGUAGES}")
    if not isinstance(hyp, str) or not hyp.strip():
        raise SchemaViolation(line, "hypothesis", "must be a non-empty string")
    ref = obj.get("reference")
    if ref is not None and not isinstance(ref, str):
        raise SchemaViolation(line, "reference", "must be a string")
    nbest = obj.get("nbest")
    if nbest is not None:
        if (
            not isinstance(nbest, list)
            or len(nbest) < 2
            or not all(isinstance(h, str) and h.strip() for h in nbest)
        ):
            raise SchemaViolation(line, "nbest", "must list at least 2 non-empty strings")
        nbest = tuple(nbest)
    return CorpusRecord(rid, lang, hyp, ref, nbest)


def parse_lines(lines: Iterable[str]) -> list[CorpusRecord]:
    records, seen = [], set()
    for lineno, raw in enumerate(lines, 1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(lineno, "<json>", str(exc)) from exc
        rec = _validate(obj, lineno)
        if rec.id in seen:
            raise SchemaViolation(lineno, "id", f"duplicate id {rec.id!r}")
        seen.add(rec.id)
        records.append(rec)
    return records


def ingest(path: str | Path) -> list[CorpusRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_lines(text.split("\n"))


def dumps(records: Iterable[CorpusRecord]) -> str:
    return "".join(json.dumps(r.to_dict(), ensure_ascii=False) + "\n" for r in records)


def export(records: Iterable[CorpusRecord], path: str | Path) -> None:
    Path(path).write_text(dumps(records), encoding="utf-8")


def sample_corpus() -> list[CorpusRecord]:
    """The bundled 20-sentence corpus (10 zh, 10 en) with references and n-best lists."""
    text = resources.files("lirasr").joinpath("data").joinpath("sample_corpus.jsonl").read_text("utf-8")
    return parse_lines(text.split("\n"))


def derive_seed(seed: int, key: str) -> int:
    """Stable 64-bit per-record seed, independent of record order."""
    digest = hashlib.blake2b(f"{seed}:{key}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")
