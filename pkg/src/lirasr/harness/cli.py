"""Command line entry point.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 backend failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..errors import BackendConfigError, BackendError, DataError, IoFailure
from . import config as config_mod
from .corpus import dumps, ingest
from .pipeline import baseline_corpus, correct_corpus, inject_corpus
from .report import convergence_export, evaluate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BACKEND = 0, 1, 2, 3
BACKEND_KINDS = {"live": "live-http", "oracle": "oracle", "heuristic": "heuristic"}

logger = logging.getLogger("lirasr")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_globals(p: argparse.ArgumentParser, sub: bool) -> None:
    d = {"default": argparse.SUPPRESS} if sub else {}
    p.add_argument("--config", type=Path, help="JSON config file", **({"default": None} if not sub else d))
    p.add_argument("--seed", type=int, help="64-bit seed (overrides config)", **({"default": None} if not sub else d))
    p.add_argument("--backend", choices=sorted(BACKEND_KINDS), help="backend kind (overrides config)",
                   **({"default": None} if not sub else d))
    p.add_argument("--workers", type=int, help="records processed concurrently",
                   **({"default": None} if not sub else d))
    p.add_argument("-v", "--verbose", action="store_true", **({"default": False} if not sub else d))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lirasr", description="Iterative ASR transcript correction.")
    _add_globals(parser, sub=False)
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = subs.add_parser("correct", help="run the iterative correction loop")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--trace", type=Path, help="write per-iteration traces (JSONL)")
    p.add_argument("--no-timing", action="store_true", help="omit wall_time from traces")
    _add_globals(p, sub=True)

    p = subs.add_parser("baseline", help="single-shot direct or n-best correction")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--mode", choices=("direct", "nbest"), required=True)
    p.add_argument("--n", type=int, default=3)
    _add_globals(p, sub=True)

    p = subs.add_parser("inject", help="corrupt references with phonetic substitutions")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--rate", type=float, help="substitution rate (overrides config)")
    p.add_argument("--homophone-bias", type=float)
    p.add_argument("--indel-rate", type=float)
    p.add_argument("--edits", type=Path, help="write injected edit positions (JSONL)")
    _add_globals(p, sub=True)

    p = subs.add_parser("evaluate", help="CER/WER before and after correction")
    p.add_argument("input", type=Path, help="corpus with references")
    p.add_argument("outputs", type=Path, help="JSONL of {id, output}")
    p.add_argument("--json", type=Path, help="write the full report as JSON")
    _add_globals(p, sub=True)

    p = subs.add_parser("export-trace", help="per-iteration CER/WER curves as CSV")
    p.add_argument("trace", type=Path)
    p.add_argument("--corpus", type=Path, required=True, help="corpus with references")
    p.add_argument("-o", "--output", type=Path, required=True)
    _add_globals(p, sub=True)
    return parser


def _load_config(args: argparse.Namespace) -> config_mod.HarnessConfig:
    cfg = config_mod.load(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.workers is not None:
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        cfg = dataclasses.replace(cfg, workers=args.workers)
    if args.backend is not None:
        try:
            backend = dataclasses.replace(cfg.backend, kind=BACKEND_KINDS[args.backend])
        except BackendConfigError as exc:
            raise UsageError(str(exc)) from exc
        cfg = dataclasses.replace(cfg, backend=backend)
    return cfg


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _outputs_jsonl(records, outputs: dict[str, str]) -> str:
    lines = []
    for rec in sorted(records, key=lambda r: r.id):
        row = {"id": rec.id, "language": rec.language, "hypothesis": rec.hypothesis,
               "output": outputs[rec.id]}
        lines.append(json.dumps(row, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


def _read_jsonl(path: Path) -> list[dict]:
    try:
        raw = path.read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    rows = []
    for lineno, line in enumerate(raw, 1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from exc
    return rows


def _cmd_correct(args, cfg) -> int:
    records = ingest(args.input)
    result = correct_corpus(records, cfg)
    _write(args.output, _outputs_jsonl(records, result.outputs))
    if args.trace:
        lines = []
        for rid, its in result.traces(timing=not args.no_timing).items():
            lines.extend(json.dumps({"record_id": rid, **it}, ensure_ascii=False) for it in its)
        _write(args.trace, "".join(line + "\n" for line in lines))
    if result.stats.total_outage:
        logger.error("every backend call failed")
        return EXIT_BACKEND
    return EXIT_OK


def _cmd_baseline(args, cfg) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    records = ingest(args.input)
    result = baseline_corpus(records, cfg, args.mode, args.n)
    _write(args.output, _outputs_jsonl(records, result.outputs))
    if result.stats.total_outage:
        logger.error("every backend call failed")
        return EXIT_BACKEND
    return EXIT_OK


def _cmd_inject(args, cfg) -> int:
    noise = cfg.noise
    overrides = {"substitution_rate": args.rate, "homophone_bias": args.homophone_bias,
                 "indel_rate": args.indel_rate}
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.seed is not None:
        overrides["seed"] = args.seed
    try:
        noise = dataclasses.replace(noise, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records, edits = inject_corpus(ingest(args.input), noise, cfg.loop.table_threshold)
    _write(args.output, dumps(records))
    if args.edits:
        lines = [json.dumps({"id": rid, "edits": [e.to_dict() for e in es]}, ensure_ascii=False)
                 for rid, es in edits.items()]
        _write(args.edits, "".join(line + "\n" for line in lines))
    return EXIT_OK


def _cmd_evaluate(args, cfg) -> int:
    records = ingest(args.input)
    outputs = {}
    for row in _read_jsonl(args.outputs):
        if not isinstance(row, dict) or "id" not in row or "output" not in row:
            raise DataError(f"{args.outputs}: rows need 'id' and 'output'")
        outputs[row["id"]] = row["output"]
    report = evaluate(records, outputs)
    if args.json:
        _write(args.json, report.to_json())
    sys.stdout.write(report.to_text())
    return EXIT_OK


def _cmd_export(args, cfg) -> int:
    records = ingest(args.corpus)
    traces: dict[str, list[dict]] = {}
    for row in _read_jsonl(args.trace):
        try:
            traces.setdefault(row["record_id"], []).append(row)
        except (TypeError, KeyError) as exc:
            raise DataError(f"{args.trace}: trace rows need 'record_id'") from exc
    try:
        csv_text = convergence_export(traces, records)
    except KeyError as exc:
        raise DataError(f"{args.trace}: trace row missing {exc}") from exc
    _write(args.output, csv_text)
    return EXIT_OK


COMMANDS = {
    "correct": _cmd_correct,
    "baseline": _cmd_baseline,
    "inject": _cmd_inject,
    "evaluate": _cmd_evaluate,
    "export-trace": _cmd_export,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"lirasr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _load_config(args)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, config_mod.ConfigError) as exc:
        print(f"lirasr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"lirasr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BackendError as exc:
        print(f"lirasr: backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
