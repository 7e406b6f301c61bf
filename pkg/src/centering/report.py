"""Whole-document analysis and the report structures the CLI emits."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Mapping

from .corpus import SCHEMA_VERSION, DiscourseDocument
from .engine import CenteringState, Rule, RuleCheck, RuleStatus, TransitionLabel, advance
from .felicity import FelicityLabel, FelicityVerdict, Reason, judge
from .model import Discourse, Utterance
from .resolver import EventKind, ResolutionResult, TraceEvent, resolve_utterance


@dataclass(frozen=True)
class UtteranceRecord:
    utterance: str
    cb: str | None
    cf: tuple[str, ...]
    transition: TransitionLabel
    rule_checks: tuple[RuleCheck, ...]
    bindings: Mapping[str, str]
    trace: tuple[TraceEvent, ...]
    felicity: FelicityVerdict
    garden_path: bool = False
    ambiguous: bool = False


@dataclass(frozen=True)
class Mismatch:
    utterance: str
    field: str
    expected: Any
    actual: Any

    def __str__(self) -> str:
        return f"{self.utterance} {self.field}: expected {self.expected!r}, got {self.actual!r}"


@dataclass(frozen=True)
class AnalysisReport:
    source: str
    records: tuple[UtteranceRecord, ...]
    mismatches: tuple[Mismatch, ...] = ()
    summary: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "source": self.source,
            "utterances": [_record_obj(r) for r in self.records],
            "summary": {k: dict(v) for k, v in self.summary.items()},
            "mismatches": [
                {"utterance": m.utterance, "field": m.field, "expected": m.expected, "actual": m.actual}
                for m in self.mismatches
            ],
        }

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> AnalysisReport:
        return cls(
            source=obj["source"],
            records=tuple(_record_from(r) for r in obj["utterances"]),
            mismatches=tuple(Mismatch(**m) for m in obj["mismatches"]),
            summary={k: dict(v) for k, v in obj["summary"].items()},
        )


def _record_obj(r: UtteranceRecord) -> dict:
    return {
        "utterance": r.utterance,
        "cb": r.cb,
        "cf": list(r.cf),
        "transition": r.transition.value,
        "rule_checks": [
            {"rule": c.rule.value, "status": c.status.value, "detail": c.detail, "expressions": list(c.expressions)}
            for c in r.rule_checks
        ],
        "bindings": dict(r.bindings),
        "trace": [
            {
                "position": e.position,
                "kind": e.kind.value,
                "detail": e.detail,
                "expression": e.expression,
                "entity": e.entity,
                "clause": e.clause,
            }
            for e in r.trace
        ],
        "felicity": {
            "label": r.felicity.label.value,
            "reasons": [x.value for x in r.felicity.reasons],
            "ambiguous": r.felicity.ambiguous,
        },
        "garden_path": r.garden_path,
        "ambiguous": r.ambiguous,
    }


def _record_from(obj: Mapping[str, Any]) -> UtteranceRecord:
    fel = obj["felicity"]
    return UtteranceRecord(
        utterance=obj["utterance"],
        cb=obj["cb"],
        cf=tuple(obj["cf"]),
        transition=TransitionLabel(obj["transition"]),
        rule_checks=tuple(
            RuleCheck(Rule(c["rule"]), RuleStatus(c["status"]), c["detail"], tuple(c["expressions"]))
            for c in obj["rule_checks"]
        ),
        bindings=dict(obj["bindings"]),
        trace=tuple(
            TraceEvent(e["position"], EventKind(e["kind"]), e["detail"], e["expression"], e["entity"], e["clause"])
            for e in obj["trace"]
        ),
        felicity=FelicityVerdict(
            FelicityLabel(fel["label"]), tuple(Reason(x) for x in fel["reasons"]), fel["ambiguous"]
        ),
        garden_path=obj["garden_path"],
        ambiguous=obj["ambiguous"],
    )


def centering_bindings(utterance: Utterance, resolution: ResolutionResult) -> dict[str, str]:
    """Gold references where annotated, resolver output elsewhere."""
    out = dict(resolution.bindings)
    for key, _, expr in utterance.keyed_expressions():
        if expr.gold_ref is not None:
            out[key] = expr.gold_ref
    return out


def states(discourse: Discourse) -> dict[str, CenteringState]:
    """Centering state after each utterance, keyed by utterance id."""
    out = {}
    state = None
    for utt in discourse.utterances:
        resolution = resolve_utterance(utt, state, discourse.entity_table)
        state, _, _ = advance(state, utt, centering_bindings(utt, resolution), discourse.entity_table)
        out[utt.id] = state
    return out


def analyze_discourse(discourse: Discourse) -> list[UtteranceRecord]:
    entities = discourse.entity_table
    records = []
    state: CenteringState | None = None
    for utt in discourse.utterances:
        resolution = resolve_utterance(utt, state, entities)
        new_state, transition, checks = advance(state, utt, centering_bindings(utt, resolution), entities)
        subject = utt.main_subject()
        verdict = judge(transition, subject[1].form if subject else None, resolution, checks)
        records.append(
            UtteranceRecord(
                utterance=utt.id,
                cb=new_state.cb,
                cf=new_state.cf,
                transition=transition.label,
                rule_checks=tuple(checks),
                bindings=dict(resolution.bindings),
                trace=resolution.trace,
                felicity=verdict,
                garden_path=resolution.garden_path,
                ambiguous=resolution.ambiguous,
            )
        )
        state = new_state
    return records


def _actual(record: UtteranceRecord, key: str) -> Any:
    return {
        "cb": record.cb,
        "cf": list(record.cf),
        "transition": record.transition.value,
        "felicity": record.felicity.label.value,
        "reasons": [r.value for r in record.felicity.reasons],
        "rules": {c.rule.value: c.status.value for c in record.rule_checks},
        "bindings": dict(record.bindings),
        "garden_path": record.garden_path,
        "ambiguous": record.ambiguous,
        "events": sorted({e.kind.value for e in record.trace}),
    }[key]


def compare(records: list[UtteranceRecord], expected: Mapping[str, Mapping[str, Any]]) -> list[Mismatch]:
    """Differences between computed records and an ``expected`` block.

    ``reasons`` and ``events`` list items that must be present; ``rules``
    and ``bindings`` are checked only for the keys they name.
    """
    by_id = {r.utterance: r for r in records}
    out = []
    for uid, entry in expected.items():
        record = by_id[uid]
        for key, want in entry.items():
            got = _actual(record, key)
            if key in ("reasons", "events"):
                if not set(want) <= set(got):
                    out.append(Mismatch(uid, key, want, got))
            elif key in ("rules", "bindings"):
                for name, value in want.items():
                    if got.get(name) != value:
                        out.append(Mismatch(uid, f"{key}.{name}", value, got.get(name)))
            elif got != want:
                out.append(Mismatch(uid, key, want, got))
    return out


def summarize(records: list[UtteranceRecord]) -> dict[str, dict[str, int]]:
    return {
        "transitions": dict(sorted(Counter(r.transition.value for r in records).items())),
        "felicity": dict(sorted(Counter(r.felicity.label.value for r in records).items())),
    }


def analyze(doc: DiscourseDocument, source: str = "") -> AnalysisReport:
    records = analyze_discourse(doc.discourse)
    mismatches = compare(records, doc.expected) if doc.expected else []
    return AnalysisReport(
        source=source,
        records=tuple(records),
        mismatches=tuple(mismatches),
        summary=summarize(records),
    )


def lint(doc: DiscourseDocument) -> list[str]:
    """Soft problems that ``--strict`` turns into errors."""
    warnings = []
    for utt in doc.discourse.utterances:
        for key, _, expr in utt.keyed_expressions():
            if expr.form.pronominal and expr.gold_ref is None:
                warnings.append(f"{utt.id} {key}: pronoun without gold_ref; centering uses the resolver's guess")
    return warnings


def format_text(report: AnalysisReport, trace: bool = False) -> str:
    lines = [f"== {report.source}"] if report.source else []
    for r in report.records:
        cf = ", ".join(r.cf)
        lines.append(
            f"{r.utterance}  Cb={r.cb or '-'} Cf=[{cf}] transition={r.transition.value} "
            f"felicity={r.felicity.label.value}"
        )
        if trace:
            for c in r.rule_checks:
                lines.append(f"    {c.rule.value}: {c.status.value}  {c.detail}")
            if r.felicity.reasons:
                lines.append(f"    reasons: {', '.join(x.value for x in r.felicity.reasons)}")
            for key, ent in r.bindings.items():
                lines.append(f"    {key} -> {ent}")
            for e in r.trace:
                lines.append(f"    [c{e.clause}@{e.position}] {e.kind.value:<12} {e.detail}")
            flags = [name for name, on in (("garden_path", r.garden_path), ("ambiguous", r.ambiguous)) if on]
            if flags:
                lines.append(f"    flags: {', '.join(flags)}")
    for m in report.mismatches:
        lines.append(f"MISMATCH {m}")
    counts = "; ".join(f"{k}: " + ", ".join(f"{a}={n}" for a, n in v.items()) for k, v in report.summary.items())
    lines.append(f"summary  {counts}")
    return "\n".join(lines)
