"""CER/WER reports and per-iteration convergence export."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..errors import DataError, MissingReference
from ..metrics import EditCounts, cer_counts, wer_counts
from .corpus import CorpusRecord

CSV_HEADER = ("record_id", "iteration", "cer", "wer", "score", "fsm_state")


@dataclass(frozen=True)
class RecordScores:
    id: str
    language: str
    cer_before: EditCounts
    cer_after: EditCounts
    wer_before: EditCounts
    wer_after: EditCounts

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "language": self.language,
            "cer_before": self.cer_before.rate,
            "cer_after": self.cer_after.rate,
            "wer_before": self.wer_before.rate,
            "wer_after": self.wer_after.rate,
        }


def _macro(rows: Sequence[RecordScores]) -> dict[str, float]:
    n = len(rows)
    out = {
        key: sum(getattr(r, key).rate for r in rows) / n
        for key in ("cer_before", "cer_after", "wer_before", "wer_after")
    }
    out["delta_cer"] = out["cer_before"] - out["cer_after"]
    out["delta_wer"] = out["wer_before"] - out["wer_after"]
    return out


def _micro(rows: Sequence[RecordScores]) -> dict[str, float]:
    out = {}
    for key in ("cer_before", "cer_after", "wer_before", "wer_after"):
        counts = [getattr(r, key) for r in rows]
        out[key] = sum(c.errors for c in counts) / sum(c.reference_length for c in counts)
    out["delta_cer"] = out["cer_before"] - out["cer_after"]
    out["delta_wer"] = out["wer_before"] - out["wer_after"]
    return out


@dataclass(frozen=True)
class EvalReport:
    """Per-record and aggregate error rates.

    Rates are fractions. ``macro`` is the mean of per-record rates (the headline
    figure); ``micro`` pools edit counts over the corpus. Deltas are
    before - after, so positive means the correction helped.
    """

    records: tuple[RecordScores, ...]

    def groups(self) -> dict[str, list[RecordScores]]:
        out: dict[str, list[RecordScores]] = {}
        for r in self.records:
            out.setdefault(r.language, []).append(r)
        return dict(sorted(out.items()))

    def aggregate(self, rows: Sequence[RecordScores] | None = None) -> dict:
        rows = list(self.records if rows is None else rows)
        if not rows:
            return {"n": 0}
        return {"n": len(rows), "macro": _macro(rows), "micro": _micro(rows)}

    def to_dict(self) -> dict:
        return {
            "aggregation": "macro = mean of per-record rates; micro = pooled edit counts",
            "records": [r.to_dict() for r in self.records],
            "languages": {lang: self.aggregate(rows) for lang, rows in self.groups().items()},
            "overall": self.aggregate(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        """Aligned table in percent with two decimals."""
        head = ("scope", "avg", "n", "CER before", "CER after", "WER before", "WER after",
                "dCER / dWER")
        rows = []
        scopes = [(lang, rows_) for lang, rows_ in self.groups().items()]
        scopes.append(("all", list(self.records)))
        for name, group in scopes:
            agg = self.aggregate(group)
            for kind in ("macro", "micro"):
                a = agg[kind]
                rows.append((
                    name, kind, str(agg["n"]),
                    f"{100 * a['cer_before']:.2f}", f"{100 * a['cer_after']:.2f}",
                    f"{100 * a['wer_before']:.2f}", f"{100 * a['wer_after']:.2f}",
                    f"{100 * a['delta_cer']:+.2f} / {100 * a['delta_wer']:+.2f}",
                ))
        widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head, *rows]]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"


def evaluate(records: Iterable[CorpusRecord], outputs: Mapping[str, str]) -> EvalReport:
    rows = []
    for rec in sorted(records, key=lambda r: r.id):
        if rec.reference is None or not rec.reference.strip():
            raise MissingReference(f"{rec.id}: no reference")
        if rec.id not in outputs:
            raise DataError(f"{rec.id}: no corrected output")
        out, lang = outputs[rec.id], rec.language
        rows.append(RecordScores(
            rec.id, lang,
            cer_counts(rec.reference, rec.hypothesis, lang),
            cer_counts(rec.reference, out, lang),
            wer_counts(rec.reference, rec.hypothesis, lang),
            wer_counts(rec.reference, out, lang),
        ))
    return EvalReport(tuple(rows))


def convergence_rows(
    traces: Mapping[str, Sequence[Mapping]], records: Iterable[CorpusRecord]
) -> list[tuple]:
    """One row per iteration: the accepted transcript's CER/WER and score.

    ``traces`` maps record id to that record's serialized iteration traces.
    ``fsm_state`` is the state the iteration ran in.
    """
    by_id = {r.id: r for r in records}
    rows = []
    for rid in sorted(traces):
        rec = by_id.get(rid)
        if rec is None or rec.reference is None:
            raise MissingReference(f"{rid}: no reference for trace")
        for it in traces[rid]:
            text = it["accepted"]
            rows.append((
                rid,
                it["iteration"],
                cer_counts(rec.reference, text, rec.language).rate,
                wer_counts(rec.reference, text, rec.language).rate,
                it["accepted_score"],
                it["fsm_before"]["state"],
            ))
    return rows


def convergence_export(
    traces: Mapping[str, Sequence[Mapping]], records: Iterable[CorpusRecord]
) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in convergence_rows(traces, records):
        rid, it, c, w, score, state = row
        writer.writerow((rid, it, repr(c), repr(w), repr(float(score)), state))
    return buf.getvalue()
