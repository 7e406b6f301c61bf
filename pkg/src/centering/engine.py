"""Forward/backward-looking centers, transitions and realization rules."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import Entity, Form, Role, Utterance

# Highest rank first.  Only subject-first is fixed by the theory; the rest is
# the usual obliqueness ordering.
ROLE_HIERARCHY: tuple[Role, ...] = (
    Role.SUBJECT,
    Role.DIRECT_OBJECT,
    Role.INDIRECT_OBJECT,
    Role.OBLIQUE,
    Role.POSSESSOR,
    Role.OTHER,
)

# Forms counted as "a pronoun" by R1.  Reflexives are grammar-forced.
R1_FORMS = frozenset({Form.NULL_SUBJECT, Form.CLITIC_PRONOUN, Form.STRONG_PRONOUN})


class TransitionLabel(str, enum.Enum):
    CONTINUATION = "continuation"
    RETENTION = "retention"
    SHIFTING = "shifting"
    INITIAL = "initial"


class Rule(str, enum.Enum):
    R1 = "r1"
    R2 = "r2"


class RuleStatus(str, enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    VACUOUS = "vacuous"


@dataclass(frozen=True)
class CenteringState:
    cf: tuple[str, ...]
    cb: str | None = None
    source_utterance: str | None = None

    def __post_init__(self) -> None:
        if len(set(self.cf)) != len(self.cf):
            raise ValueError(f"duplicate entities in cf {self.cf}")
        if self.cb is not None and self.cb not in self.cf:
            raise ValueError(f"cb {self.cb!r} is not among cf {self.cf}")

    @property
    def head(self) -> str | None:
        return self.cf[0] if self.cf else None


@dataclass(frozen=True)
class Transition:
    label: TransitionLabel
    cb: str | None = None
    prev_cb: str | None = None


@dataclass(frozen=True)
class RuleCheck:
    rule: Rule
    status: RuleStatus
    detail: str = ""
    expressions: tuple[str, ...] = ()


def _is_segment(entity_id: str, entities: Mapping[str, Entity] | None) -> bool:
    return entities is not None and entity_id in entities and entities[entity_id].is_segment


def _binding(key: str, expr, bindings: Mapping[str, str] | None) -> str | None:
    return expr.gold_ref if bindings is None else bindings.get(key)


def rank_cfs(
    utterance: Utterance,
    entities: Mapping[str, Entity],
    bindings: Mapping[str, str] | None = None,
    hierarchy: Sequence[Role] = ROLE_HIERARCHY,
) -> list[str]:
    """Order the individuals realized in ``utterance``, highest rank first.

    Rank is by grammatical role, then clause order, then token position.
    An entity realized more than once keeps its best rank.  Without
    ``bindings`` the gold references are used.
    """
    best: dict[str, tuple[int, int, int]] = {}
    for key, ci, expr in utterance.keyed_expressions():
        ent = _binding(key, expr, bindings)
        if ent is None or _is_segment(ent, entities):
            continue
        rank = (hierarchy.index(expr.role), ci, expr.position)
        if ent not in best or rank < best[ent]:
            best[ent] = rank
    return sorted(best, key=best.__getitem__)


def realized_entities(
    utterance: Utterance,
    entities: Mapping[str, Entity],
    bindings: Mapping[str, str] | None = None,
) -> frozenset[str]:
    return frozenset(rank_cfs(utterance, entities, bindings))


def compute_cb(realized: Iterable[str], prev: CenteringState | None) -> str | None:
    """Backward-looking center of the next utterance given what it realizes."""
    if prev is None:
        return None
    realized = set(realized)
    if prev.cb is not None and prev.cb in realized:
        return prev.cb
    for ent in prev.cf:
        if ent in realized:
            return ent
    return None


def classify_transition(prev: CenteringState | None, cur: CenteringState) -> Transition:
    if prev is None:
        return Transition(TransitionLabel.INITIAL, cb=cur.cb)
    if cur.cb is None or cur.cb != prev.cb:
        label = TransitionLabel.SHIFTING
    elif cur.cb == cur.head:
        label = TransitionLabel.CONTINUATION
    else:
        label = TransitionLabel.RETENTION
    return Transition(label, cb=cur.cb, prev_cb=prev.cb)


def check_r1(
    utterance: Utterance,
    bindings: Mapping[str, str],
    cb: str | None,
    entities: Mapping[str, Entity] | None = None,
) -> RuleCheck:
    """A lone pronoun must denote the Cb."""
    pronouns = [
        key
        for key, _, expr in utterance.keyed_expressions()
        if expr.form in R1_FORMS and not _is_segment(bindings.get(key, ""), entities)
    ]
    if len(pronouns) != 1:
        return RuleCheck(Rule.R1, RuleStatus.VACUOUS, f"{len(pronouns)} pronouns")
    (key,) = pronouns
    if cb is None:
        return RuleCheck(Rule.R1, RuleStatus.VACUOUS, "no Cb established")
    bound = bindings.get(key)
    if bound == cb:
        return RuleCheck(Rule.R1, RuleStatus.SATISFIED, f"{key} denotes the Cb {cb}", (key,))
    return RuleCheck(
        Rule.R1, RuleStatus.VIOLATED, f"single pronoun {key} denotes {bound}, not the Cb {cb}", (key,)
    )


def check_r2(
    prev: CenteringState | None,
    utterance: Utterance,
    bindings: Mapping[str, str],
    entities: Mapping[str, Entity] | None = None,
) -> RuleCheck:
    """If a lower Cf is pronominalized, every realized higher Cf must be too."""
    if prev is None or not prev.cf:
        return RuleCheck(Rule.R2, RuleStatus.VACUOUS, "no previous forward-looking centers")
    pronominal: dict[str, list[str]] = {}
    other: dict[str, list[str]] = {}
    for key, _, expr in utterance.keyed_expressions():
        ent = bindings.get(key)
        if ent is None or _is_segment(ent, entities):
            continue
        (pronominal if expr.form.pronominal else other).setdefault(ent, []).append(key)

    pairs = []
    keys: list[str] = []
    for i, high in enumerate(prev.cf):
        if high in pronominal or high not in other:
            continue
        for low in prev.cf[i + 1 :]:
            if low in pronominal:
                pairs.append(f"{high} > {low}")
                keys += other[high] + pronominal[low]
    if pairs:
        offending = tuple(dict.fromkeys(keys))
        detail = f"{'; '.join(pairs)}: higher center not pronominalized (expressions {', '.join(offending)})"
        return RuleCheck(Rule.R2, RuleStatus.VIOLATED, detail, offending)
    return RuleCheck(Rule.R2, RuleStatus.SATISFIED, "no offending pair")


def advance(
    prev: CenteringState | None,
    utterance: Utterance,
    bindings: Mapping[str, str],
    entities: Mapping[str, Entity],
) -> tuple[CenteringState, Transition, list[RuleCheck]]:
    """Fold one utterance into the centering state."""
    cf = rank_cfs(utterance, entities, bindings)
    cb = compute_cb(cf, prev)
    state = CenteringState(cf=tuple(cf), cb=cb, source_utterance=utterance.id)
    transition = classify_transition(prev, state)
    checks = [check_r1(utterance, bindings, cb, entities), check_r2(prev, utterance, bindings, entities)]
    return state, transition, checks
