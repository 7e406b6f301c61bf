import pytest
from hypothesis import given

from centering.engine import CenteringState
from centering.model import (
    Clause,
    Entity,
    EntityKind,
    Form,
    Gender,
    MorphFeatures,
    Placement,
    ReferringExpression,
    Role,
    compatible,
    expression_key,
)
from centering.report import centering_bindings, states
from centering.resolver import (
    BindingBasis,
    EventKind,
    UnresolvableError,
    resolve_clause,
    resolve_utterance,
)

from generators import discourses
from harness import gold_states, resolver_disagreements


def resolve(doc, uid):
    d = doc.discourse
    ids = [u.id for u in d.utterances]
    i = ids.index(uid)
    prev = states(d)[ids[i - 1]] if i else None
    return resolve_utterance(d.utterance(uid), prev, d.entity_table)


def revises(res, expr):
    return [e for e in res.trace if e.kind is EventKind.REVISE and e.expression == expr]


def test_ex1(doc):
    a = resolve(doc("ex1_a"), "u1")
    assert {k: a.bindings[k] for k in ("subj", "gli")} == {"subj": "carlo", "gli": "mario"}
    b = resolve(doc("ex1_b"), "u1")
    assert {k: b.bindings[k] for k in ("subj", "gli")} == {"subj": "mario", "gli": "carlo"}


def test_ex2_d1_default_binding(doc):
    r = resolve(doc("ex2_d1"), "b")
    assert r.bindings["subj"] == "carlo" and r.bindings["gli"] == "mario"
    assert not r.garden_path and not revises(r, "subj")
    assert r.hypotheses["subj"].basis is BindingBasis.DEFAULT_HIGHEST_CF


def test_ex2_d2_preverbal_clitic_revise(doc):
    d = doc("ex2_d2")
    r = resolve(d, "b")
    assert r.bindings == {"subj": "maria", "gli": "carlo"}
    (rev,) = revises(r, "subj")
    gli = d.discourse.utterance("b").clauses[0].expressions[1]
    assert rev.position == gli.position <= d.discourse.utterance("b").clauses[0].window_end
    assert not r.garden_path
    assert r.hypotheses["subj"].basis is BindingBasis.FILTER_FORCED


def test_ex5_u2b_enclitic_garden_path(doc):
    d = doc("ex5_u2b")
    r = resolve(d, "u2")
    (rev,) = revises(r, "subj")
    assert rev.position > d.discourse.utterance("u2").clauses[0].window_end
    assert r.garden_path
    assert r.bindings == {"subj": "giorgio", "le": "maria"}


def test_ex5_u2c_climbed_clitic(doc):
    r = resolve(doc("ex5_u2c"), "u2")
    assert revises(r, "subj") and not r.garden_path


def test_ex5_u2a(doc):
    r = resolve(doc("ex5_u2a"), "u2")
    assert r.bindings == {"subj": "maria", "gli": "giorgio"}


def test_ex4_u3d_participle_filter(doc):
    d = doc("ex4_u3d")
    r = resolve(d, "u3")
    (rev,) = revises(r, "subj")
    assert rev.position == d.discourse.utterance("u3").clauses[0].window_end
    assert r.bindings["subj"] == "giovanni" and not r.garden_path


def test_ex4_u3b_ambiguous(doc):
    r = resolve(doc("ex4_u3b"), "u3")
    assert r.bindings["subj"] == "maria" and r.ambiguous


def test_ex4_u3c_strong_skips_default(doc):
    r = resolve(doc("ex4_u3c"), "u3")
    assert r.bindings["subj"] == "giovanni"
    assert r.default_candidate == "maria"


def test_ex6_override(doc):
    r = resolve(doc("ex6"), "u2")
    assert r.hypotheses["subj"].basis is BindingBasis.GOLD_OVERRIDE
    assert r.bindings["subj"] == "marito"


def test_ex7_segment_skipped(doc):
    r = resolve(doc("ex7"), "u3")
    (skip,) = [e for e in r.trace if e.kind is EventKind.SKIP_SEGMENT]
    assert skip.entity == "confronto" and r.bindings["subj"] == "confronto"


def test_subordinate_clause_never_sets_garden_path(doc):
    # U3.a's subordinate subject is an override; only the main clause counts
    r = resolve(doc("ex4_u3a"), "u3")
    assert not r.garden_path and r.subject == "subj"


MARIA = Entity("maria", Gender.FEMININE)
CARLO = Entity("carlo", Gender.MASCULINE)
ENTS = {"maria": MARIA, "carlo": CARLO}


def test_no_candidate_is_unresolvable():
    clause = Clause(
        (ReferringExpression(Form.NULL_SUBJECT, Role.SUBJECT, 0, MorphFeatures(gender=Gender.FEMININE)),),
        (1, 1),
    )
    with pytest.raises(UnresolvableError) as info:
        resolve_clause(clause, CenteringState(("carlo",)), ENTS)
    assert info.value.expression == "c0e0"


def test_strong_pronoun_takes_default_when_alone():
    clause = Clause((ReferringExpression(Form.STRONG_PRONOUN, Role.SUBJECT, 0),), (1, 1))
    r = resolve_clause(clause, CenteringState(("carlo",)), ENTS)
    assert r.bindings == {"c0e0": "carlo"}


def test_two_clitics_are_disjoint():
    gli = ReferringExpression(Form.CLITIC_PRONOUN, Role.INDIRECT_OBJECT, 0, clitic_placement=Placement.PREVERBAL)
    lo = ReferringExpression(Form.CLITIC_PRONOUN, Role.DIRECT_OBJECT, 1, clitic_placement=Placement.PREVERBAL)
    r = resolve_clause(Clause((gli, lo), (2, 2)), CenteringState(("maria", "carlo")), ENTS)
    assert r.bindings["c0e0"] != r.bindings["c0e1"]


def test_segment_candidates_ignored():
    ents = dict(ENTS, seg=Entity("seg", Gender.MASCULINE, kind=EntityKind.SEGMENT))
    clause = Clause((ReferringExpression(Form.NULL_SUBJECT, Role.SUBJECT, 0),), (1, 1))
    r = resolve_clause(clause, CenteringState(("seg", "carlo")), ents)
    assert r.bindings == {"c0e0": "carlo"} and r.default_candidate == "carlo"


# -- properties over generated discourses ------------------------------------


def _resolutions(d, with_index=False):
    for prev, utt in gold_states(d):
        state = prev if prev is not None else CenteringState(())
        for ci, clause in enumerate(utt.clauses):
            try:
                res = resolve_clause(clause, state, d.entity_table, ci)
            except UnresolvableError:
                continue
            yield (ci, clause, res) if with_index else (clause, res)


def _replay(trace, upto=None):
    out = {}
    for e in trace:
        if upto is not None and e.position > upto:
            break
        if e.kind in (EventKind.BIND, EventKind.REVISE, EventKind.SKIP_SEGMENT) and e.expression:
            out[e.expression] = e.entity
    return out


@given(discourses())
def test_agrees_with_enumerator(d):
    assert resolver_disagreements(d) == []


@given(discourses())
def test_trace_replays_to_bindings(d):
    for _, res in _resolutions(d):
        assert _replay(res.trace) == dict(res.bindings)
        positions = [e.position for e in res.trace]
        assert positions == sorted(positions)


@given(discourses())
def test_every_revise_follows_a_filter(d):
    for _, res in _resolutions(d):
        for n, e in enumerate(res.trace):
            if e.kind is EventKind.REVISE:
                assert any(
                    f.kind is EventKind.FILTER and f.position == e.position for f in res.trace[:n]
                ), res.trace


@given(discourses())
def test_bindings_respect_features(d):
    ents = d.entity_table
    for ci, clause, res in _resolutions(d, with_index=True):
        for i, expr in enumerate(clause.expressions):
            key = expression_key(ci, i, expr)
            ent = res.bindings[key]
            if ents[ent].is_segment or not expr.form.pronominal or expr.pragmatic_override:
                continue
            assert compatible(expr.features, ents[ent]), key


@given(discourses())
def test_garden_path_iff_late_subject_revise(d):
    for clause, res in _resolutions(d):
        late = [
            e for e in res.trace
            if e.kind is EventKind.REVISE and e.expression == res.subject and e.position > clause.window_end
        ]  # fmt: skip
        assert res.garden_path == bool(late)
        if not res.garden_path and res.subject is not None:
            # a subject bound by the window end keeps that binding
            final = res.bindings[res.subject]
            assert _replay(res.trace, clause.window_end).get(res.subject, final) == final


@given(discourses())
def test_deterministic(d):
    assert list(_resolutions(d)) == list(_resolutions(d))


@given(discourses())
def test_centering_bindings_prefer_gold(d):
    for prev, utt in gold_states(d):
        try:
            res = resolve_utterance(utt, prev, d.entity_table)
        except UnresolvableError:
            continue
        b = centering_bindings(utt, res)
        for key, _, expr in utt.keyed_expressions():
            assert b[key] == (expr.gold_ref if expr.gold_ref is not None else res.bindings[key])
