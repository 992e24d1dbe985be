"""Command-line entry point: ``centering {analyze,report,validate,felicity,resolve}``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from centering import corpus, stats
from centering.engine import Convention, analyze_discourse, resolve_pronouns
from centering.model import AnnotationError

COMMANDS = ("analyze", "report", "validate", "felicity", "resolve")
FORMATS = {"plain": "plain", "csv": "csv", "md": "md"}


@dataclass(frozen=True)
class CliConfig:
    command: str
    inputs: tuple[str, ...]
    out: Optional[str] = None
    format: str = "plain"
    strict: bool = False
    convention: Convention = Convention.CONTINUE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centering", description="Centering analysis of annotated discourses."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("inputs", nargs="+", help="interchange documents ('-' reads stdin)")
    parser.add_argument("--format", choices=sorted(FORMATS), default="plain")
    parser.add_argument("--strict", action="store_true", help="reject unknown fields")
    parser.add_argument(
        "--segment-initial",
        choices=[c.value for c in Convention],
        default=Convention.CONTINUE.value,
        help="transition after a segment-initial unit (default: continue)",
    )
    parser.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


class _Failure(Exception):
    pass


def _load(path: str, config: CliConfig):
    """Return (discourse, analysis-or-None) for one input."""
    raw = _read(path)
    try:
        doc = corpus._load_json(raw)
        if isinstance(doc, dict) and corpus.is_analysis(doc) and config.command == "report":
            return None, corpus.load_analysis(doc, strict=config.strict)
        return corpus.parse_corpus(doc, strict=config.strict), None
    except corpus.CorpusError as exc:
        raise _Failure(f"{path}: {exc}") from None


def _analyze(path: str, config: CliConfig):
    discourse, analysis = _load(path, config)
    if analysis is not None:
        return analysis
    try:
        return analyze_discourse(discourse, config.convention)
    except AnnotationError as exc:
        raise _Failure(f"{path}: {exc}") from None


def _felicity(results, fmt: str) -> str:
    rows = [["input", "unit", "mention", "kind", "detail"]]
    for path, result in results:
        for f in result.felicity_findings:
            rows.append([path, f.unit_id, f.mention_id, f.kind.value, f.detail])
    if fmt == "csv":
        import csv
        import io

        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    if fmt == "md":
        return stats._markdown(rows) + "\n"
    return stats._plain(rows) + "\n"


def run(config: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    outputs: list[str] = []
    try:
        if config.command == "validate":
            status = 0
            for path in config.inputs:
                diag = corpus.validate(_read(path), strict=config.strict)
                for w in diag.warnings:
                    print(f"{path}: warning: {w}", file=stderr)
                for e in diag.errors:
                    print(f"{path}: error: {e}", file=stderr)
                if diag.errors:
                    status = 1
                outputs.append(f"{path}: {'ok' if diag.clean else 'invalid'} "
                               f"({len(diag.errors)} errors, {len(diag.warnings)} warnings)\n")
            _emit(config, "".join(outputs), stdout)
            return status

        if config.command == "resolve":
            for path in config.inputs:
                discourse, _ = _load(path, config)
                res = resolve_pronouns(discourse, config.convention)
                resolved = corpus.apply_assignments(discourse, res.assignments)
                doc = corpus.serialize_discourse(resolved)
                doc["resolution"] = [
                    {
                        "mention": mid,
                        "entity": res.assignments[mid],
                        "candidates": [
                            {"entity": e, "transition": t.value} for e, t in res.candidates[mid]
                        ],
                    }
                    for mid in res.assignments
                ]
                doc["unresolvable"] = list(res.unresolvable)
                outputs.append(corpus.dumps(doc))
            _emit(config, "".join(outputs), stdout)
            return 0

        results = [(path, _analyze(path, config)) for path in config.inputs]
        if config.command == "analyze":
            text = "".join(corpus.dumps(corpus.serialize_analysis(r)) for _, r in results)
        elif config.command == "report":
            text = stats.report([r for _, r in results], FORMATS[config.format])
        else:
            text = _felicity(results, config.format)
        _emit(config, text, stdout)
        return 0
    except _Failure as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return 1


def _emit(config: CliConfig, text: str, stdout) -> None:
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.ERROR, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    config = CliConfig(
        command=args.command,
        inputs=tuple(args.inputs),
        out=args.out,
        format=args.format,
        strict=args.strict,
        convention=Convention(args.segment_initial),
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
