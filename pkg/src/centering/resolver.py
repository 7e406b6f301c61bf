"""Left-to-right pronoun resolution with morphological and disjointness filters.

A clause is processed in token order.  Each pronoun gets a provisional
binding when it is read; later cues (a clitic's gender, the agreement
features of the finite verb or participle) may force an earlier binding to
be revised.  A revision of the main-clause subject that happens after the
agreement window has closed is a garden path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .engine import ROLE_HIERARCHY, CenteringState
from .model import (
    Clause,
    ClauseType,
    Entity,
    Form,
    MorphFeatures,
    Utterance,
    compatible,
    expression_key,
)


class BindingBasis(str, enum.Enum):
    DEFAULT_HIGHEST_CF = "default_highest_cf"
    FILTER_FORCED = "filter_forced"
    GOLD_OVERRIDE = "gold_override"


class EventKind(str, enum.Enum):
    BIND = "bind"
    FILTER = "filter"
    REVISE = "revise"
    SKIP_SEGMENT = "skip_segment"


@dataclass(frozen=True)
class BindingHypothesis:
    expression: str
    entity: str
    basis: BindingBasis


@dataclass(frozen=True)
class TraceEvent:
    position: int
    kind: EventKind
    detail: str
    expression: str | None = None
    entity: str | None = None
    clause: int = 0


@dataclass(frozen=True)
class ResolutionResult:
    bindings: Mapping[str, str]
    trace: tuple[TraceEvent, ...] = ()
    garden_path: bool = False
    ambiguous: bool = False
    hypotheses: Mapping[str, BindingHypothesis] = field(default_factory=dict)
    # main-clause subject and the candidate a null subject would default to
    subject: str | None = None
    default_candidate: str | None = None


class UnresolvableError(ValueError):
    def __init__(self, expression: str, message: str):
        super().__init__(f"cannot resolve {expression}: {message}")
        self.expression = expression


def candidates(state: CenteringState, entities: Mapping[str, Entity]) -> list[str]:
    """Individuals available as antecedents, highest-ranked first."""
    return [e for e in state.cf if not entities[e].is_segment]


def strong_subject_order(domain: list[str], default: str | None) -> list[str]:
    """A strong subject pronoun prefers anything over the default referent."""
    rest = [c for c in domain if c != default]
    return rest + [c for c in domain if c == default]


_VAR, _FIXED, _OVERRIDE, _SKIP, _TIED = "var", "fixed", "override", "skip", "tied"


class _ClauseResolver:
    def __init__(self, clause: Clause, state: CenteringState, entities: Mapping[str, Entity], clause_index: int):
        self.clause = clause
        self.entities = entities
        self.ci = clause_index
        self.exprs = clause.expressions
        self.keys = [expression_key(clause_index, i, e) for i, e in enumerate(self.exprs)]
        self.cands = candidates(state, entities)
        self.default = self.cands[0] if self.cands else None
        self.subject = clause.subject_index
        self.modes = [self._mode(i) for i in range(len(self.exprs))]

        self.value: dict[int, str] = {}
        self.basis: dict[int, BindingBasis] = {}
        self.order: list[int] = []  # processed variables, subject first
        self.fixed: dict[int, str] = {}
        self.clitics: list[int] = []  # processed non-reflexive clitics
        self.tied: list[int] = []
        self.agreement_active = False
        self.events: list[TraceEvent] = []

    # -- setup -------------------------------------------------------------

    def _mode(self, i: int) -> str:
        expr = self.exprs[i]
        gold = expr.gold_ref
        if gold is not None and gold in self.entities and self.entities[gold].is_segment:
            return _SKIP
        if not expr.form.pronominal:
            if gold is None:
                raise UnresolvableError(self.keys[i], f"{expr.form.value} without gold_ref")
            return _FIXED
        if expr.pragmatic_override:
            return _OVERRIDE
        s = self.subject
        if expr.form is Form.REFLEXIVE_CLITIC and s is not None and s != i and self._mode(s) != _SKIP:
            return _TIED
        return _VAR

    # -- constraints -------------------------------------------------------

    def domain(self, i: int) -> list[str]:
        feats = [self.exprs[i].features]
        if i == self.subject:
            if self.agreement_active:
                feats.append(self.clause.agreement)
            feats += [self.exprs[t].features for t in self.tied]
        return [c for c in self.cands if all(compatible(f, self.entities[c]) for f in feats)]

    def preference(self, i: int) -> list[str]:
        dom = self.domain(i)
        expr = self.exprs[i]
        if i == self.subject and expr.form is Form.STRONG_PRONOUN:
            return strong_subject_order(dom, self.default)
        return dom

    def pairs(self) -> Iterator[tuple[int, int]]:
        s = self.subject
        subject_live = s is not None and (s in self.fixed or s in self.order)
        for n, c in enumerate(self.clitics):
            if subject_live and c != s:
                yield s, c
            for other in self.clitics[n + 1 :]:
                yield c, other

    def solutions(self, order: list[int]) -> Iterator[dict[int, str]]:
        pairs = list(self.pairs())
        doms = {i: self.domain(i) for i in order}
        assign: dict[int, str] = {}

        def ok(i: int) -> bool:
            for a, b in pairs:
                if i not in (a, b):
                    continue
                other = b if a == i else a
                val = assign.get(other, self.fixed.get(other))
                if val is not None and val == assign[i]:
                    return False
            return True

        def rec(k: int) -> Iterator[dict[int, str]]:
            if k == len(order):
                yield dict(assign)
                return
            i = order[k]
            for c in doms[i]:
                assign[i] = c
                if ok(i):
                    yield from rec(k + 1)
                del assign[i]

        if all(doms.values()) or not order:
            yield from rec(0)

    def solve(self, new: int | None) -> dict[int, str] | None:
        """Best consistent assignment: fewest revisions, subject revised first,
        then highest-ranked candidates."""
        order = self.order
        prefs = {i: self.preference(i) for i in order}

        def cost(sol: dict[int, str]):
            changed = [n for n, j in enumerate(order) if j != new and sol[j] != self.value[j]]
            return (len(changed), changed, [prefs[j].index(sol[j]) for j in order])

        return min(self.solutions(order), key=cost, default=None)

    # -- events ------------------------------------------------------------

    def emit(self, position: int, kind: EventKind, detail: str, i: int | None = None, entity: str | None = None):
        key = self.keys[i] if i is not None else None
        self.events.append(TraceEvent(position, kind, detail, key, entity, self.ci))

    def describe(self, i: int) -> str:
        return f"{self.keys[i]} ({self.exprs[i].label})"

    def apply(self, sol: dict[int, str], position: int, new: int | None, reason: str, announce: bool = False) -> None:
        """Commit ``sol``: bind ``new``, then filter and revise events."""
        changed = [j for j in self.order if j != new and sol[j] != self.value[j]]
        if new is not None:
            self.value[new] = sol[new]
            self.basis[new] = BindingBasis.DEFAULT_HIGHEST_CF
            self.emit(position, EventKind.BIND, f"{self.describe(new)} -> {sol[new]}", new, sol[new])
        if changed or announce:
            self.emit(position, EventKind.FILTER, reason)
        for j in changed:
            old = self.value[j]
            self.value[j] = sol[j]
            self.basis[j] = BindingBasis.FILTER_FORCED
            self.emit(position, EventKind.REVISE, f"{self.describe(j)}: {old} -> {sol[j]}", j, sol[j])
        self.sync_tied(position)

    def sync_tied(self, position: int) -> None:
        s = self.subject
        target = None if s is None else self.value.get(s, self.fixed.get(s))
        if target is None:
            return
        for t in self.tied:
            if not compatible(self.exprs[t].features, self.entities[target]):
                raise UnresolvableError(self.keys[t], "reflexive features clash with the subject")
            if t not in self.value:
                self.value[t] = target
                self.basis[t] = BindingBasis.DEFAULT_HIGHEST_CF
                self.emit(position, EventKind.BIND, f"{self.describe(t)} -> {target} (reflexive)", t, target)
            elif self.value[t] != target:
                self.value[t] = target
                self.basis[t] = BindingBasis.FILTER_FORCED
                self.emit(position, EventKind.REVISE, f"{self.describe(t)} follows the subject -> {target}", t, target)

    def commit(self, i: int, position: int, new: int | None, reason: str, announce: bool) -> None:
        sol = self.solve(new)
        if sol is None:
            raise UnresolvableError(self.keys[i], "no binding consistent with the cues read so far")
        self.apply(sol, position, new, reason, announce)

    # -- processing --------------------------------------------------------

    def run(self) -> tuple[dict[str, str], dict[str, BindingHypothesis], bool]:
        agenda = [(e.position, 0, i) for i, e in enumerate(self.exprs)]
        if self.subject is not None and self.modes[self.subject] == _VAR and self.clause.agreement:
            agenda.append((self.clause.window_end, 1, -1))
        for position, _, i in sorted(agenda):
            if i < 0:
                self.close_window(position)
            else:
                self.read(i, position)

        bindings: dict[str, str] = {}
        hyps: dict[str, BindingHypothesis] = {}
        for i, key in enumerate(self.keys):
            mode = self.modes[i]
            if mode in (_SKIP, _FIXED, _OVERRIDE):
                bindings[key] = self.exprs[i].gold_ref
                if mode == _OVERRIDE:
                    hyps[key] = BindingHypothesis(key, bindings[key], BindingBasis.GOLD_OVERRIDE)
            elif i in self.value:
                bindings[key] = self.value[i]
                hyps[key] = BindingHypothesis(key, self.value[i], self.basis[i])
            else:
                raise UnresolvableError(key, "reflexive without a bound subject")
        ambiguous = sum(1 for _ in zip(range(2), self.solutions(self.order))) > 1
        return bindings, hyps, ambiguous

    def read(self, i: int, position: int) -> None:
        expr, mode = self.exprs[i], self.modes[i]
        is_clitic = expr.form is Form.CLITIC_PRONOUN
        if mode == _SKIP:
            self.emit(position, EventKind.SKIP_SEGMENT, f"{self.describe(i)} refers to segment {expr.gold_ref}", i, expr.gold_ref)
        elif mode == _TIED:
            self.read_reflexive(i, position)
        elif mode in (_FIXED, _OVERRIDE):
            self.fixed[i] = expr.gold_ref
            how = "pragmatic override" if mode == _OVERRIDE else expr.form.value
            self.emit(position, EventKind.BIND, f"{self.describe(i)} -> {expr.gold_ref} ({how})", i, expr.gold_ref)
            if is_clitic:
                self.clitics.append(i)
            if is_clitic or (i == self.subject and self.clitics):
                self.commit(i, position, None, self.disjoint_reason(i), announce=is_clitic)
            self.sync_tied(position)
        else:
            if i == self.subject:
                self.order.insert(0, i)
            else:
                self.order.append(i)
            if is_clitic:
                self.clitics.append(i)
            self.commit(i, position, i, self.disjoint_reason(i), announce=is_clitic)

    def disjoint_reason(self, i: int) -> str:
        if self.exprs[i].form is Form.CLITIC_PRONOUN:
            return f"{self.describe(i)} is not reflexive: disjoint from the subject and other clitics"
        return f"{self.describe(i)} constrains earlier bindings"

    def read_reflexive(self, i: int, position: int) -> None:
        s = self.subject
        self.tied.append(i)
        reason = f"{self.describe(i)} is reflexive: corefers with the subject"
        if s in self.fixed:
            self.emit(position, EventKind.FILTER, reason)
        elif s in self.order:
            self.commit(i, position, None, reason, announce=True)
        else:
            self.emit(position, EventKind.FILTER, reason + " (not yet read)")
        self.sync_tied(position)

    def close_window(self, position: int) -> None:
        reason = f"agreement window closes: subject must agree with {_fmt(self.clause.agreement)}"
        self.agreement_active = True
        if self.subject in self.order:
            self.commit(self.subject, position, None, reason, announce=True)
        else:
            self.emit(position, EventKind.FILTER, reason)


def _fmt(features: MorphFeatures) -> str:
    parts = [
        features.gender and features.gender.value,
        features.number and features.number.value,
        features.person and f"person {features.person}",
    ]
    return ", ".join(p for p in parts if p) or "nothing"


def resolve_clause(
    clause: Clause,
    state: CenteringState,
    entities: Mapping[str, Entity],
    clause_index: int = 0,
) -> ResolutionResult:
    """Resolve the pronouns of one clause against ``state``'s centers."""
    r = _ClauseResolver(clause, state, entities, clause_index)
    bindings, hyps, ambiguous = r.run()
    subject = r.keys[r.subject] if r.subject is not None else None
    garden_path = subject is not None and any(
        e.kind is EventKind.REVISE and e.expression == subject and e.position > clause.window_end
        for e in r.events
    )
    return ResolutionResult(
        bindings=bindings,
        trace=tuple(r.events),
        garden_path=garden_path,
        ambiguous=ambiguous,
        hypotheses=hyps,
        subject=subject,
        default_candidate=r.default,
    )


def _clause_state(
    utterance: Utterance,
    upto: int,
    bindings: Mapping[str, str],
    state: CenteringState,
    entities: Mapping[str, Entity],
) -> CenteringState:
    """Candidates for a later clause: what earlier clauses realized, then the
    previous utterance's centers."""
    best: dict[str, tuple[int, int, int]] = {}
    for key, ci, expr in utterance.keyed_expressions():
        if ci >= upto:
            break
        ent = bindings.get(key)
        if ent is None or entities[ent].is_segment:
            continue
        rank = (ROLE_HIERARCHY.index(expr.role), ci, expr.position)
        if ent not in best or rank < best[ent]:
            best[ent] = rank
    local = sorted(best, key=best.__getitem__)
    cf = tuple(local + [e for e in state.cf if e not in best])
    return CenteringState(cf=cf, cb=state.cb, source_utterance=state.source_utterance)


def resolve_utterance(
    utterance: Utterance,
    state: CenteringState | None,
    entities: Mapping[str, Entity],
) -> ResolutionResult:
    """Resolve every clause in order; only the main clause decides
    ``garden_path`` and ``ambiguous``."""
    state = state if state is not None else CenteringState(cf=())
    bindings: dict[str, str] = {}
    hyps: dict[str, BindingHypothesis] = {}
    trace: list[TraceEvent] = []
    main = None
    for ci, clause in enumerate(utterance.clauses):
        clause_state = state if ci == 0 else _clause_state(utterance, ci, bindings, state, entities)
        result = resolve_clause(clause, clause_state, entities, ci)
        bindings.update(result.bindings)
        hyps.update(result.hypotheses)
        trace.extend(result.trace)
        if clause.clause_type is ClauseType.MAIN:
            main = result
    assert main is not None, "utterance without a main clause"
    return ResolutionResult(
        bindings=bindings,
        trace=tuple(trace),
        garden_path=main.garden_path,
        ambiguous=main.ambiguous,
        hypotheses=hyps,
        subject=main.subject,
        default_candidate=main.default_candidate,
    )
