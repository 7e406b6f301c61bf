"""Felicity of subject forms, and advice on which form to produce."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import CenteringState, RuleCheck, RuleStatus, Rule, Transition, TransitionLabel
from .model import EMPTY_FEATURES, Animacy, Entity, Form, MorphFeatures, Role, compatible
from .resolver import BindingBasis, ResolutionResult, candidates, strong_subject_order


class FelicityLabel(str, enum.Enum):
    FELICITOUS = "felicitous"
    MARKED = "marked"
    INFELICITOUS_GARDEN_PATH = "infelicitous_garden_path"
    VIOLATION = "violation"


class Reason(str, enum.Enum):
    NULL_CONTINUE = "null_continue"
    STRONG_SHIFT = "strong_shift"
    NULL_SHIFT_LICENSED = "null_shift_licensed"
    NULL_SHIFT_UNLICENSED = "null_shift_unlicensed"
    STRONG_CONTINUE_MARKED = "strong_continue_marked"
    R1_VIOLATION = "r1_violation"
    R2_VIOLATION = "r2_violation"
    GARDEN_PATH = "garden_path"
    PRAGMATIC_OVERRIDE_APPLIED = "pragmatic_override_applied"
    # null subject moving to the hearer's default referent, which becomes the new Cb
    NULL_DEFAULT_SHIFT = "null_default_shift"


@dataclass(frozen=True)
class FelicityVerdict:
    label: FelicityLabel
    reasons: tuple[Reason, ...] = ()
    ambiguous: bool = False


@dataclass(frozen=True)
class FormAdvice:
    form: Form
    rationale: str


_RULE_REASON = {Rule.R1: Reason.R1_VIOLATION, Rule.R2: Reason.R2_VIOLATION}


def judge(
    transition: Transition,
    subject_form: Form | None,
    resolution: ResolutionResult,
    checks: Sequence[RuleCheck],
) -> FelicityVerdict:
    """Label the main-clause subject choice; the first matching case wins."""

    def verdict(label: FelicityLabel, *reasons: Reason) -> FelicityVerdict:
        return FelicityVerdict(label, reasons, resolution.ambiguous)

    violated = [_RULE_REASON[c.rule] for c in checks if c.status is RuleStatus.VIOLATED]
    if violated:
        return verdict(FelicityLabel.VIOLATION, *dict.fromkeys(violated))
    if resolution.garden_path:
        return verdict(FelicityLabel.INFELICITOUS_GARDEN_PATH, Reason.GARDEN_PATH)

    subject = resolution.subject
    hyp = resolution.hypotheses.get(subject) if subject is not None else None
    if hyp is not None and hyp.basis is BindingBasis.GOLD_OVERRIDE:
        return verdict(FelicityLabel.FELICITOUS, Reason.PRAGMATIC_OVERRIDE_APPLIED)

    label = transition.label
    if label is TransitionLabel.INITIAL or subject_form not in (Form.NULL_SUBJECT, Form.STRONG_PRONOUN):
        return verdict(FelicityLabel.FELICITOUS)

    bound = resolution.bindings.get(subject) if subject is not None else None
    is_default = bound is not None and bound == resolution.default_candidate
    if subject_form is Form.NULL_SUBJECT:
        if label is TransitionLabel.CONTINUATION:
            return verdict(FelicityLabel.FELICITOUS, Reason.NULL_CONTINUE)
        if hyp is not None and hyp.basis is BindingBasis.FILTER_FORCED:
            return verdict(FelicityLabel.FELICITOUS, Reason.NULL_SHIFT_LICENSED)
        if (
            label is TransitionLabel.SHIFTING
            and hyp is not None
            and hyp.basis is BindingBasis.DEFAULT_HIGHEST_CF
            and is_default
            and bound == transition.cb
        ):
            return verdict(FelicityLabel.FELICITOUS, Reason.NULL_DEFAULT_SHIFT)
        return verdict(FelicityLabel.MARKED, Reason.NULL_SHIFT_UNLICENSED)

    if label is not TransitionLabel.CONTINUATION or not is_default:
        return verdict(FelicityLabel.FELICITOUS, Reason.STRONG_SHIFT)
    return verdict(FelicityLabel.MARKED, Reason.STRONG_CONTINUE_MARKED)


def advise_form(
    intended: str,
    role: Role,
    state: CenteringState,
    entities: Mapping[str, Entity],
    planned: MorphFeatures = EMPTY_FEATURES,
) -> FormAdvice:
    """Recommend how to refer to ``intended`` as the subject of the next clause.

    ``planned`` holds the agreement features the speaker's verb group will
    carry inside the agreement window (e.g. a participle's gender).
    """
    if intended not in state.cf:
        raise ValueError(f"{intended!r} is not an available center")
    if role is not Role.SUBJECT:
        return FormAdvice(Form.CLITIC_PRONOUN, "non_subject_clitic")
    target = entities[intended]
    if not compatible(planned, target):
        raise ValueError(f"planned agreement features do not fit {intended!r}")

    cands = candidates(state, entities)
    if intended == cands[0]:
        return FormAdvice(Form.NULL_SUBJECT, "continue_default_referent")
    if planned and [c for c in cands if compatible(planned, entities[c])] == [intended]:
        return FormAdvice(Form.NULL_SUBJECT, "agreement_selects_referent")

    strong = MorphFeatures(gender=target.gender, number=target.number, person=3)
    domain = [c for c in cands if compatible(strong, entities[c]) and compatible(planned, entities[c])]
    if strong_subject_order(domain, cands[0])[:1] == [intended]:
        return FormAdvice(Form.STRONG_PRONOUN, "strong_pronoun_skips_default")
    if target.animacy is Animacy.ANIMATE:
        return FormAdvice(Form.PROPER_NAME, "pronoun_would_misresolve")
    return FormAdvice(Form.DEFINITE_NP, "pronoun_would_misresolve")
