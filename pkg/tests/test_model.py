import random
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from centering.model import (
    Clause,
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
    compatible,
    validate,
)

from generators import discourses, random_discourse

MARIA = Entity("maria", Gender.FEMININE)
CARLO = Entity("carlo", Gender.MASCULINE)
MARIO = Entity("mario", Gender.MASCULINE)


def _doc(*exprs, language=Language.ITALIAN, entities=(MARIA, CARLO)):
    clause = Clause(tuple(exprs), (0, 1))
    return Discourse(tuple(entities), (Utterance("u1", (clause,)),), language)


def _name(ent, role=Role.SUBJECT, pos=0):
    return ReferringExpression(Form.PROPER_NAME, role, pos, gold_ref=ent)


def test_ex4_document_is_valid(doc):
    assert validate(doc("ex4").discourse) == []


def test_every_corpus_document_is_valid(corpus):
    for name, d in corpus.items():
        assert validate(d.discourse) == [], name


def test_two_subjects_in_one_clause():
    d = _doc(_name("maria"), _name("carlo", pos=1))
    (v,) = validate(d)
    assert v.utterance == "u1" and v.clause == 0
    assert "subject" in v.message


def test_clitic_without_placement():
    gli = ReferringExpression(Form.CLITIC_PRONOUN, Role.INDIRECT_OBJECT, 1, gold_ref="carlo")
    (v,) = validate(_doc(_name("maria"), gli))
    assert "placement" in v.message


def test_placement_on_non_clitic_rejected():
    bad = replace(_name("maria"), clitic_placement=Placement.PREVERBAL)
    assert len(validate(_doc(bad))) == 1


def test_undeclared_gold_ref():
    (v,) = validate(_doc(_name("luigi")))
    assert "luigi" in v.message


def test_null_subject_not_allowed_in_english():
    null = ReferringExpression(Form.NULL_SUBJECT, Role.SUBJECT, 0, gold_ref="maria")
    assert validate(_doc(null, language=Language.ENGLISH))
    assert validate(_doc(null)) == []


def test_positions_must_increase():
    a = _name("maria")
    b = _name("carlo", Role.DIRECT_OBJECT, pos=0)
    assert validate(_doc(a, b))


def test_duplicate_entity_ids():
    assert validate(_doc(_name("maria"), entities=(MARIA, MARIA)))


def test_compatible_examples():
    masc = MorphFeatures(gender=Gender.MASCULINE)
    assert not compatible(masc, MARIA)
    assert compatible(MorphFeatures(), MARIA)
    assert compatible(masc, CARLO) and compatible(masc, MARIO)


def test_compatible_rejects_segments():
    seg = Entity("s", Gender.MASCULINE, kind=EntityKind.SEGMENT)
    with pytest.raises(ValueError, match="segment entities have no morphology"):
        compatible(MorphFeatures(), seg)


def test_first_person_never_matches_an_entity():
    assert not compatible(MorphFeatures(person=1), CARLO)


features = st.builds(
    MorphFeatures,
    gender=st.none() | st.sampled_from(Gender),
    number=st.none() | st.sampled_from(Number),
    person=st.none() | st.integers(1, 3),
)
individuals = st.builds(Entity, id=st.just("x"), gender=st.sampled_from(Gender), number=st.sampled_from(Number))


@given(features, individuals, st.sampled_from(["gender", "number", "person"]))
def test_compatible_monotone(f, e, field):
    if compatible(f, e):
        assert compatible(replace(f, **{field: None}), e)


@given(discourses())
def test_validate_deterministic(d):
    assert validate(d) == validate(d) == []


def test_generator_respects_bounds():
    for seed in range(200):
        d = random_discourse(random.Random(seed))
        assert len(d.utterances) <= 3 and len(d.entities) <= 4
        assert all(len(c.expressions) <= 4 for u in d.utterances for c in u.clauses)
