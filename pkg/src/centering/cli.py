"""Command-line front end.

    centering analyze [--emit text|json] [--trace] [--strict] FILE...
    centering advise FILE --utterance ID --intended ENTITY
    centering corpus-check

Exit status: 0 when every expected annotation matches, 1 on mismatches,
2 on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .corpus import DocumentError, SCHEMA_VERSION, corpus_dir, corpus_files, load_document
from .felicity import advise_form
from .model import Gender, MorphFeatures, Number, Role
from .report import AnalysisReport, analyze, format_text, lint, states
from .resolver import UnresolvableError

OK, MISMATCH, INPUT_ERROR = 0, 1, 2


def _analyze_paths(paths: Sequence[Path], emit: str, trace: bool, strict: bool, out, err) -> int:
    reports: list[AnalysisReport] = []
    failed = False
    for path in paths:
        try:
            doc = load_document(path)
            warnings = lint(doc)
            for w in warnings:
                print(f"{path}: warning: {w}", file=err)
            if strict and warnings:
                print(f"{path}: error: --strict and {len(warnings)} warning(s)", file=err)
                failed = True
                continue
            report = analyze(doc, source=str(path))
        except (OSError, DocumentError, UnresolvableError) as exc:
            print(f"{path}: error: {exc}", file=err)
            failed = True
            continue
        reports.append(report)
        if emit == "text":
            print(format_text(report, trace=trace), file=out)

    if emit == "json":
        payload = {"schema_version": SCHEMA_VERSION, "reports": [r.to_dict() for r in reports]}
        print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
    if failed:
        return INPUT_ERROR
    return MISMATCH if any(r.mismatches for r in reports) else OK


def cmd_analyze(args, out, err) -> int:
    return _analyze_paths([Path(p) for p in args.files], args.emit, args.trace, args.strict, out, err)


def cmd_corpus_check(args, out, err) -> int:
    directory = corpus_dir()
    files = corpus_files(directory)
    if not files:
        print(f"no corpus documents in {directory}", file=err)
        return INPUT_ERROR
    status = _analyze_paths(files, args.emit, args.trace, False, out, err)
    if args.emit == "text":
        verdict = {OK: "all documents match", MISMATCH: "MISMATCHES found", INPUT_ERROR: "input errors"}[status]
        print(f"corpus-check: {len(files)} documents, {verdict}", file=out)
    return status


def cmd_advise(args, out, err) -> int:
    try:
        doc = load_document(args.file)
        table = doc.discourse.entity_table
        if args.intended not in table:
            raise KeyError(f"unknown entity {args.intended!r}")
        after = states(doc.discourse)
        if args.utterance not in after:
            raise KeyError(f"unknown utterance {args.utterance!r}")
        planned = MorphFeatures(
            gender=Gender(args.gender) if args.gender else None,
            number=Number(args.number) if args.number else None,
        )
        advice = advise_form(args.intended, Role(args.role), after[args.utterance], table, planned)
    except (OSError, DocumentError, UnresolvableError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else exc
        print(f"{args.file}: error: {msg}", file=err)
        return INPUT_ERROR
    print(f"{advice.form.value}  ({advice.rationale})", file=out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centering", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze discourse documents")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--emit", choices=("text", "json"), default="text")
    p.add_argument("--trace", action="store_true", help="show rule checks, bindings and resolution events")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("advise", help="recommend a subject form for the utterance after ID")
    p.add_argument("file", metavar="FILE")
    p.add_argument("--utterance", required=True, metavar="ID", help="plan the utterance that follows ID")
    p.add_argument("--intended", required=True, metavar="ENTITY")
    p.add_argument("--role", default="subject", choices=[r.value for r in Role])
    p.add_argument("--gender", choices=[g.value for g in Gender], help="planned participle gender")
    p.add_argument("--number", choices=[n.value for n in Number], help="planned verb number")
    p.set_defaults(func=cmd_advise)

    p = sub.add_parser("corpus-check", help="analyze the bundled corpus against its expected annotations")
    p.add_argument("--emit", choices=("text", "json"), default="text")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_corpus_check)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    return args.func(args, out, err)


if __name__ == "__main__":
    sys.exit(main())
