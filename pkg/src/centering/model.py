"""In-memory representation of annotated discourses.

Everything here is immutable.  Documents are built once (usually by
:mod:`centering.corpus`) and then shared by the engine, the resolver and
the felicity judge.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping


class Gender(str, enum.Enum):
    MASCULINE = "masculine"
    FEMININE = "feminine"


class Number(str, enum.Enum):
    SINGULAR = "singular"
    PLURAL = "plural"


class Animacy(str, enum.Enum):
    ANIMATE = "animate"
    INANIMATE = "inanimate"


class EntityKind(str, enum.Enum):
    INDIVIDUAL = "individual"
    SEGMENT = "segment"


class Form(str, enum.Enum):
    NULL_SUBJECT = "null_subject"
    CLITIC_PRONOUN = "clitic_pronoun"
    STRONG_PRONOUN = "strong_pronoun"
    PROPER_NAME = "proper_name"
    DEFINITE_NP = "definite_np"
    REFLEXIVE_CLITIC = "reflexive_clitic"

    @property
    def pronominal(self) -> bool:
        return self in PRONOMINAL_FORMS

    @property
    def clitic(self) -> bool:
        return self in (Form.CLITIC_PRONOUN, Form.REFLEXIVE_CLITIC)


PRONOMINAL_FORMS = frozenset(
    {Form.NULL_SUBJECT, Form.CLITIC_PRONOUN, Form.STRONG_PRONOUN, Form.REFLEXIVE_CLITIC}
)


class Role(str, enum.Enum):
    SUBJECT = "subject"
    DIRECT_OBJECT = "direct_object"
    INDIRECT_OBJECT = "indirect_object"
    OBLIQUE = "oblique"
    POSSESSOR = "possessor"
    OTHER = "other"


class Placement(str, enum.Enum):
    PREVERBAL = "preverbal"
    ENCLITIC = "enclitic"


class ClauseType(str, enum.Enum):
    MAIN = "main"
    SUBORDINATE = "subordinate"


class Language(str, enum.Enum):
    ITALIAN = "italian"
    ENGLISH = "english"


# Discourse referents are always third person.
ENTITY_PERSON = 3


@dataclass(frozen=True)
class Entity:
    id: str
    gender: Gender
    number: Number = Number.SINGULAR
    animacy: Animacy = Animacy.ANIMATE
    kind: EntityKind = EntityKind.INDIVIDUAL

    @property
    def is_segment(self) -> bool:
        return self.kind is EntityKind.SEGMENT


@dataclass(frozen=True)
class MorphFeatures:
    """Gender/number/person marking; ``None`` means unmarked."""

    gender: Gender | None = None
    number: Number | None = None
    person: int | None = None

    def __bool__(self) -> bool:
        return not (self.gender is None and self.number is None and self.person is None)

    def merge(self, other: MorphFeatures) -> MorphFeatures:
        """Union of two feature bundles; ``other`` wins on clashes."""
        return MorphFeatures(
            gender=other.gender if other.gender is not None else self.gender,
            number=other.number if other.number is not None else self.number,
            person=other.person if other.person is not None else self.person,
        )


EMPTY_FEATURES = MorphFeatures()


def compatible(features: MorphFeatures, entity: Entity) -> bool:
    """True iff every marked feature agrees with ``entity``."""
    if entity.is_segment:
        raise ValueError("segment entities have no morphology")
    if features.gender is not None and features.gender is not entity.gender:
        return False
    if features.number is not None and features.number is not entity.number:
        return False
    if features.person is not None and features.person != ENTITY_PERSON:
        return False
    return True


@dataclass(frozen=True)
class ReferringExpression:
    form: Form
    role: Role
    position: int
    features: MorphFeatures = EMPTY_FEATURES
    clitic_placement: Placement | None = None
    gold_ref: str | None = None
    pragmatic_override: bool = False
    id: str | None = None
    text: str | None = None

    @property
    def label(self) -> str:
        return self.text or self.form.value


@dataclass(frozen=True)
class Clause:
    expressions: tuple[ReferringExpression, ...]
    agreement_window: tuple[int, int]
    clause_type: ClauseType = ClauseType.MAIN
    agreement: MorphFeatures = EMPTY_FEATURES

    @property
    def window_end(self) -> int:
        return self.agreement_window[1]

    @property
    def subject_index(self) -> int | None:
        for i, expr in enumerate(self.expressions):
            if expr.role is Role.SUBJECT:
                return i
        return None


def expression_key(clause_index: int, expr_index: int, expr: ReferringExpression) -> str:
    """Stable name of an expression within its utterance."""
    return expr.id if expr.id is not None else f"c{clause_index}e{expr_index}"


@dataclass(frozen=True)
class Utterance:
    id: str
    clauses: tuple[Clause, ...]
    text: str | None = None

    def keyed_expressions(self) -> Iterator[tuple[str, int, ReferringExpression]]:
        for ci, clause in enumerate(self.clauses):
            for ei, expr in enumerate(clause.expressions):
                yield expression_key(ci, ei, expr), ci, expr

    @property
    def main_clause_index(self) -> int:
        for i, clause in enumerate(self.clauses):
            if clause.clause_type is ClauseType.MAIN:
                return i
        raise ValueError(f"utterance {self.id!r} has no main clause")

    def main_subject(self) -> tuple[str, ReferringExpression] | None:
        ci = self.main_clause_index
        clause = self.clauses[ci]
        si = clause.subject_index
        if si is None:
            return None
        expr = clause.expressions[si]
        return expression_key(ci, si, expr), expr


@dataclass(frozen=True)
class Discourse:
    entities: tuple[Entity, ...]
    utterances: tuple[Utterance, ...]
    language: Language = Language.ITALIAN

    @cached_property
    def entity_table(self) -> Mapping[str, Entity]:
        return {e.id: e for e in self.entities}

    def utterance(self, uid: str) -> Utterance:
        for u in self.utterances:
            if u.id == uid:
                return u
        raise KeyError(uid)


@dataclass(frozen=True)
class Violation:
    invariant: str
    message: str
    utterance: str | None = None
    clause: int | None = None
    expression: str | None = None

    def __str__(self) -> str:
        where = [
            part
            for part in (
                self.utterance and f"utterance {self.utterance}",
                self.clause is not None and f"clause {self.clause}",
                self.expression and f"expression {self.expression}",
            )
            if part
        ]
        loc = f" ({', '.join(where)})" if where else ""
        return f"{self.invariant}: {self.message}{loc}"


@dataclass
class _Checker:
    violations: list[Violation] = field(default_factory=list)

    def add(self, invariant: str, message: str, **where) -> None:
        self.violations.append(Violation(invariant, message, **where))


def validate(discourse: Discourse) -> list[Violation]:
    """Check every structural invariant; an empty list means well-formed."""
    out = _Checker()
    seen: set[str] = set()
    for entity in discourse.entities:
        if entity.id in seen:
            out.add("unique_entity_id", f"entity id {entity.id!r} declared twice")
        seen.add(entity.id)
    table = discourse.entity_table

    uids: set[str] = set()
    for utt in discourse.utterances:
        if utt.id in uids:
            out.add("unique_utterance_id", f"utterance id {utt.id!r} declared twice", utterance=utt.id)
        uids.add(utt.id)
        _validate_utterance(utt, discourse, table, out)
    return out.violations


def _validate_utterance(utt: Utterance, discourse: Discourse, table, out: _Checker) -> None:
    if not utt.clauses:
        out.add("nonempty_utterance", "utterance has no clauses", utterance=utt.id)
        return
    mains = sum(1 for c in utt.clauses if c.clause_type is ClauseType.MAIN)
    if mains != 1:
        out.add("one_main_clause", f"expected exactly one main clause, found {mains}", utterance=utt.id)

    keys: set[str] = set()
    for ci, clause in enumerate(utt.clauses):
        start, end = clause.agreement_window
        if start < 0 or start > end:
            out.add("agreement_window", f"invalid window ({start}, {end})", utterance=utt.id, clause=ci)
        _validate_person(clause.agreement, out, utterance=utt.id, clause=ci)
        subjects = [e for e in clause.expressions if e.role is Role.SUBJECT]
        if len(subjects) > 1:
            out.add("single_subject", f"{len(subjects)} subjects in one clause", utterance=utt.id, clause=ci)
        last = -1
        for ei, expr in enumerate(clause.expressions):
            key = expression_key(ci, ei, expr)
            where = dict(utterance=utt.id, clause=ci, expression=key)
            if key in keys:
                out.add("unique_expression_id", f"expression key {key!r} repeated", **where)
            keys.add(key)
            if expr.position < 0:
                out.add("position", "negative position", **where)
            if expr.position <= last:
                out.add("increasing_positions", f"position {expr.position} does not follow {last}", **where)
            last = max(last, expr.position)
            _validate_expression(expr, discourse, table, out, where)


def _validate_person(features: MorphFeatures, out: _Checker, **where) -> None:
    if features.person is not None and features.person not in (1, 2, 3):
        out.add("person", f"person must be 1, 2 or 3, not {features.person}", **where)


def _validate_expression(expr, discourse, table, out: _Checker, where: dict) -> None:
    if expr.form is Form.NULL_SUBJECT:
        if expr.role is not Role.SUBJECT:
            out.add("null_subject_role", "null subject must have role subject", **where)
        if discourse.language is Language.ENGLISH:
            out.add("english_null_subject", "english documents have no null subjects", **where)
    if expr.form.clitic and expr.clitic_placement is None:
        out.add("clitic_placement", "clitic lacks clitic_placement", **where)
    if not expr.form.clitic and expr.clitic_placement is not None:
        out.add("clitic_placement", f"{expr.form.value} cannot carry clitic_placement", **where)
    _validate_person(expr.features, out, **where)
    if expr.gold_ref is not None and expr.gold_ref not in table:
        out.add("gold_ref", f"gold_ref {expr.gold_ref!r} names no declared entity", **where)
    if not expr.form.pronominal and expr.gold_ref is None:
        out.add("gold_ref", f"{expr.form.value} needs a gold_ref to denote anything", **where)
    if expr.pragmatic_override and expr.gold_ref is None:
        out.add("pragmatic_override", "pragmatic_override requires a gold_ref", **where)
