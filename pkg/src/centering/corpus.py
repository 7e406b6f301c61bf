"""Reading and writing ``.cdoc.json`` discourse documents.

The format is plain JSON::

    {
      "schema_version": "1",
      "language": "italian",
      "entities": [{"id": "maria", "gender": "feminine"}, ...],
      "utterances": [{"id": "u1", "clauses": [...]}, ...],
      "expected": {"u1": {"transition": "initial", ...}}
    }

Keys whose value is absent or equal to the default are omitted on output,
so serializing a parsed canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .model import (
    EMPTY_FEATURES,
    Animacy,
    Clause,
    ClauseType,
    Discourse,
    Entity,
    EntityKind,
    Form,
    Gender,
    Language,
    MorphFeatures,
    Number,
    Placement,
    ReferringExpression,
    Role,
    Utterance,
    Violation,
    validate,
)

SCHEMA_VERSION = "1"
CORPUS_ENV = "CENTERING_CORPUS_DIR"
SUFFIX = ".cdoc.json"

# Expected-block fields and the labels they may take.
TRANSITION_LABELS = ("continuation", "retention", "shifting", "initial")
FELICITY_LABELS = ("felicitous", "marked", "infelicitous_garden_path", "violation")
REASON_CODES = (
    "null_continue",
    "strong_shift",
    "null_shift_licensed",
    "null_shift_unlicensed",
    "strong_continue_marked",
    "r1_violation",
    "r2_violation",
    "garden_path",
    "pragmatic_override_applied",
    "null_default_shift",
)
RULE_STATUSES = ("satisfied", "violated", "vacuous")
EVENT_KINDS = ("bind", "filter", "revise", "skip_segment")
EXPECTED_FIELDS = (
    "cb",
    "cf",
    "transition",
    "felicity",
    "reasons",
    "rules",
    "bindings",
    "garden_path",
    "ambiguous",
    "events",
)


class DocumentError(ValueError):
    """Base class for everything that can go wrong reading a document."""


class ParseError(DocumentError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(DocumentError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class VersionError(DocumentError):
    pass


class ValidationError(DocumentError):
    def __init__(self, violations: list[Violation]):
        lines = "\n".join(f"  - {v}" for v in violations)
        super().__init__(f"{len(violations)} validation violation(s):\n{lines}")
        self.violations = violations


@dataclass(frozen=True)
class DiscourseDocument:
    discourse: Discourse
    expected: Mapping[str, Mapping[str, Any]] | None = None
    schema_version: str = SCHEMA_VERSION
    title: str | None = None


# -- decoding --------------------------------------------------------------


def _fields(obj: Any, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(path, f"missing key(s): {', '.join(missing)}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise SchemaError(path, f"unknown key(s): {', '.join(unknown)}")
    return obj


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a string, got {json.dumps(value)}")
    return value


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {json.dumps(value)}")
    return value


def _bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(path, f"expected true or false, got {json.dumps(value)}")
    return value


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected a list, got {type(value).__name__}")
    return value


def _enum(cls, value: Any, path: str):
    try:
        return cls(_str(value, path))
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise SchemaError(path, f"{value!r} is not one of: {allowed}") from None


def _choice(value: Any, allowed: tuple[str, ...], path: str) -> str:
    if value not in allowed:
        raise SchemaError(path, f"{json.dumps(value)} is not one of: {', '.join(allowed)}")
    return value


def _features(obj: Any, path: str) -> MorphFeatures:
    obj = _fields(obj, path, (), ("gender", "number", "person"))
    return MorphFeatures(
        gender=_enum(Gender, obj["gender"], f"{path}.gender") if "gender" in obj else None,
        number=_enum(Number, obj["number"], f"{path}.number") if "number" in obj else None,
        person=_int(obj["person"], f"{path}.person") if "person" in obj else None,
    )


def _entity(obj: Any, path: str) -> Entity:
    obj = _fields(obj, path, ("id", "gender"), ("number", "animacy", "kind"))
    return Entity(
        id=_str(obj["id"], f"{path}.id"),
        gender=_enum(Gender, obj["gender"], f"{path}.gender"),
        number=_enum(Number, obj.get("number", "singular"), f"{path}.number"),
        animacy=_enum(Animacy, obj.get("animacy", "animate"), f"{path}.animacy"),
        kind=_enum(EntityKind, obj.get("kind", "individual"), f"{path}.kind"),
    )


def _expression(obj: Any, path: str) -> ReferringExpression:
    obj = _fields(
        obj,
        path,
        ("form", "role", "position"),
        ("id", "text", "features", "clitic_placement", "gold_ref", "pragmatic_override"),
    )
    return ReferringExpression(
        id=_str(obj["id"], f"{path}.id") if "id" in obj else None,
        text=_str(obj["text"], f"{path}.text") if "text" in obj else None,
        form=_enum(Form, obj["form"], f"{path}.form"),
        role=_enum(Role, obj["role"], f"{path}.role"),
        position=_int(obj["position"], f"{path}.position"),
        features=_features(obj["features"], f"{path}.features") if "features" in obj else EMPTY_FEATURES,
        clitic_placement=(
            _enum(Placement, obj["clitic_placement"], f"{path}.clitic_placement")
            if "clitic_placement" in obj
            else None
        ),
        gold_ref=_str(obj["gold_ref"], f"{path}.gold_ref") if "gold_ref" in obj else None,
        pragmatic_override=_bool(obj.get("pragmatic_override", False), f"{path}.pragmatic_override"),
    )


def _clause(obj: Any, path: str) -> Clause:
    obj = _fields(obj, path, ("agreement_window", "expressions"), ("clause_type", "agreement"))
    window = _list(obj["agreement_window"], f"{path}.agreement_window")
    if len(window) != 2:
        raise SchemaError(f"{path}.agreement_window", "expected [start, end]")
    return Clause(
        clause_type=_enum(ClauseType, obj.get("clause_type", "main"), f"{path}.clause_type"),
        agreement_window=(
            _int(window[0], f"{path}.agreement_window[0]"),
            _int(window[1], f"{path}.agreement_window[1]"),
        ),
        agreement=_features(obj["agreement"], f"{path}.agreement") if "agreement" in obj else EMPTY_FEATURES,
        expressions=tuple(
            _expression(e, f"{path}.expressions[{i}]")
            for i, e in enumerate(_list(obj["expressions"], f"{path}.expressions"))
        ),
    )


def _utterance(obj: Any, path: str) -> Utterance:
    obj = _fields(obj, path, ("id", "clauses"), ("text",))
    return Utterance(
        id=_str(obj["id"], f"{path}.id"),
        text=_str(obj["text"], f"{path}.text") if "text" in obj else None,
        clauses=tuple(
            _clause(c, f"{path}.clauses[{i}]")
            for i, c in enumerate(_list(obj["clauses"], f"{path}.clauses"))
        ),
    )


def _str_list(value: Any, path: str, allowed: tuple[str, ...] | None = None) -> list[str]:
    items = [_str(v, f"{path}[{i}]") for i, v in enumerate(_list(value, path))]
    if allowed is not None:
        for i, item in enumerate(items):
            _choice(item, allowed, f"{path}[{i}]")
    return items


def _expected_entry(obj: Any, path: str) -> dict[str, Any]:
    obj = _fields(obj, path, (), EXPECTED_FIELDS)
    out: dict[str, Any] = {}
    for key in EXPECTED_FIELDS:
        if key not in obj:
            continue
        value, p = obj[key], f"{path}.{key}"
        if key == "cb":
            out[key] = None if value is None else _str(value, p)
        elif key == "cf":
            out[key] = _str_list(value, p)
        elif key == "transition":
            out[key] = _choice(value, TRANSITION_LABELS, p)
        elif key == "felicity":
            out[key] = _choice(value, FELICITY_LABELS, p)
        elif key == "reasons":
            out[key] = _str_list(value, p, REASON_CODES)
        elif key == "events":
            out[key] = _str_list(value, p, EVENT_KINDS)
        elif key == "rules":
            rules = _fields(value, p, (), ("r1", "r2"))
            out[key] = {r: _choice(s, RULE_STATUSES, f"{p}.{r}") for r, s in rules.items()}
        elif key == "bindings":
            if not isinstance(value, dict):
                raise SchemaError(p, "expected an object")
            out[key] = {k: _str(v, f"{p}.{k}") for k, v in value.items()}
        else:
            out[key] = _bool(value, p)
    return out


def _expected(obj: Any, path: str) -> dict[str, dict[str, Any]]:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object keyed by utterance id")
    return {uid: _expected_entry(entry, f"{path}.{uid}") for uid, entry in obj.items()}


def _check_expected(discourse: Discourse, expected: Mapping[str, Mapping[str, Any]]) -> list[Violation]:
    out = []
    table = discourse.entity_table
    utterances = {u.id: u for u in discourse.utterances}
    for uid, entry in expected.items():
        if uid not in utterances:
            out.append(Violation("expected_reference", f"undeclared utterance {uid!r}", utterance=uid))
            continue
        keys = {k for k, _, _ in utterances[uid].keyed_expressions()}
        refs = list(entry.get("cf", []))
        if entry.get("cb") is not None:
            refs.append(entry["cb"])
        for key, ref in entry.get("bindings", {}).items():
            refs.append(ref)
            if key not in keys:
                out.append(
                    Violation("expected_reference", f"undeclared expression {key!r}", utterance=uid)
                )
        for ref in refs:
            if ref not in table:
                out.append(Violation("expected_reference", f"undeclared entity {ref!r}", utterance=uid))
    return out


def _line_col(data: bytes, offset: int) -> tuple[int, int]:
    prefix = data[:offset]
    line = prefix.count(b"\n") + 1
    return line, offset - (prefix.rfind(b"\n") + 1) + 1


def parse_document(data: bytes | str) -> DiscourseDocument:
    """Decode and validate a document.

    Raises :class:`ParseError` for malformed text, :class:`VersionError`
    for an unknown ``schema_version``, :class:`SchemaError` for structural
    problems and :class:`ValidationError` listing every invariant breach.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"invalid UTF-8: {exc.reason}", *_line_col(data, exc.start)) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except RecursionError:
        raise ParseError("document nested too deeply", 1, 1) from None

    obj = _fields(
        raw, "$", ("schema_version", "entities", "utterances"), ("language", "title", "expected")
    )
    if obj["schema_version"] != SCHEMA_VERSION:
        raise VersionError(f"unsupported schema_version {obj['schema_version']!r}; expected {SCHEMA_VERSION!r}")

    discourse = Discourse(
        language=_enum(Language, obj.get("language", "italian"), "$.language"),
        entities=tuple(
            _entity(e, f"$.entities[{i}]") for i, e in enumerate(_list(obj["entities"], "$.entities"))
        ),
        utterances=tuple(
            _utterance(u, f"$.utterances[{i}]")
            for i, u in enumerate(_list(obj["utterances"], "$.utterances"))
        ),
    )
    expected = _expected(obj["expected"], "$.expected") if "expected" in obj else None
    violations = validate(discourse)
    if expected is not None:
        violations += _check_expected(discourse, expected)
    if violations:
        raise ValidationError(violations)
    return DiscourseDocument(
        discourse=discourse,
        expected=expected,
        schema_version=SCHEMA_VERSION,
        title=_str(obj["title"], "$.title") if "title" in obj else None,
    )


# -- encoding --------------------------------------------------------------


def _features_obj(features: MorphFeatures) -> dict:
    out: dict[str, Any] = {}
    if features.gender is not None:
        out["gender"] = features.gender.value
    if features.number is not None:
        out["number"] = features.number.value
    if features.person is not None:
        out["person"] = features.person
    return out


def _entity_obj(entity: Entity) -> dict:
    out: dict[str, Any] = {"id": entity.id, "gender": entity.gender.value}
    if entity.number is not Number.SINGULAR:
        out["number"] = entity.number.value
    if entity.animacy is not Animacy.ANIMATE:
        out["animacy"] = entity.animacy.value
    if entity.kind is not EntityKind.INDIVIDUAL:
        out["kind"] = entity.kind.value
    return out


def _expression_obj(expr: ReferringExpression) -> dict:
    out: dict[str, Any] = {}
    if expr.id is not None:
        out["id"] = expr.id
    if expr.text is not None:
        out["text"] = expr.text
    out["form"] = expr.form.value
    out["role"] = expr.role.value
    out["position"] = expr.position
    if expr.features:
        out["features"] = _features_obj(expr.features)
    if expr.clitic_placement is not None:
        out["clitic_placement"] = expr.clitic_placement.value
    if expr.gold_ref is not None:
        out["gold_ref"] = expr.gold_ref
    if expr.pragmatic_override:
        out["pragmatic_override"] = True
    return out


def _clause_obj(clause: Clause) -> dict:
    out: dict[str, Any] = {}
    if clause.clause_type is not ClauseType.MAIN:
        out["clause_type"] = clause.clause_type.value
    out["agreement_window"] = list(clause.agreement_window)
    if clause.agreement:
        out["agreement"] = _features_obj(clause.agreement)
    out["expressions"] = [_expression_obj(e) for e in clause.expressions]
    return out


def _utterance_obj(utt: Utterance) -> dict:
    out: dict[str, Any] = {"id": utt.id}
    if utt.text is not None:
        out["text"] = utt.text
    out["clauses"] = [_clause_obj(c) for c in utt.clauses]
    return out


def document_to_obj(doc: DiscourseDocument) -> dict:
    out: dict[str, Any] = {"schema_version": doc.schema_version}
    if doc.title is not None:
        out["title"] = doc.title
    out["language"] = doc.discourse.language.value
    out["entities"] = [_entity_obj(e) for e in doc.discourse.entities]
    out["utterances"] = [_utterance_obj(u) for u in doc.discourse.utterances]
    if doc.expected is not None:
        out["expected"] = {
            uid: {k: entry[k] for k in EXPECTED_FIELDS if k in entry} for uid, entry in doc.expected.items()
        }
    return out


def serialize_document(doc: DiscourseDocument) -> bytes:
    return (json.dumps(document_to_obj(doc), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# -- bundled corpus --------------------------------------------------------


def corpus_dir() -> Path:
    override = os.environ.get(CORPUS_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("centering") / "corpus"))


def corpus_files(directory: Path | None = None) -> list[Path]:
    directory = corpus_dir() if directory is None else directory
    return sorted(directory.glob(f"*{SUFFIX}"))


def example_id(path: Path) -> str:
    return path.name[: -len(SUFFIX)] if path.name.endswith(SUFFIX) else path.stem


def load_document(path: Path | str) -> DiscourseDocument:
    return parse_document(Path(path).read_bytes())


def load_corpus(directory: Path | None = None) -> dict[str, DiscourseDocument]:
    return {example_id(p): load_document(p) for p in corpus_files(directory)}
