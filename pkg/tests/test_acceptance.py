"""Acceptance criteria; each test prints one PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest.
"""

import io
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from centering.cli import main as cli_main  # noqa: E402
from centering.corpus import DiscourseDocument, parse_document, serialize_document  # noqa: E402
from centering.engine import CenteringState, advance  # noqa: E402
from centering.model import validate  # noqa: E402
from centering.resolver import EventKind, UnresolvableError, resolve_clause  # noqa: E402

from generators import random_discourse  # noqa: E402
from harness import (  # noqa: E402
    centering_disagreements,
    gold_bindings,
    gold_states,
    resolver_disagreements,
    round_trip_failures,
)

N_DISCOURSES = 1000
SEED = 20240611


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    print(line)
    return ok


def _generated():
    rng = random.Random(SEED)
    return [random_discourse(rng) for _ in range(N_DISCOURSES)]


def criterion_corpus():
    out, err = io.StringIO(), io.StringIO()
    start = time.perf_counter()
    code = cli_main(["corpus-check"], out, err)
    elapsed = time.perf_counter() - start
    ok = code == 0 and elapsed < 1.0
    return report("1 corpus fidelity", ok, f"exit {code}, {elapsed:.3f}s; {out.getvalue().strip().splitlines()[-1]}")


def criterion_oracles():
    clauses = bad = 0
    for d in _generated():
        clauses += sum(len(u.clauses) for u in d.utterances)
        bad += len(resolver_disagreements(d)) + len(centering_disagreements(d))
    return report(
        "2 oracle equivalence", bad == 0, f"{N_DISCOURSES} discourses, {clauses} clauses, {bad} disagreements"
    )


def criterion_invariants():
    failures = []
    cases = 0
    for d in _generated():
        cases += 1
        if validate(d) != validate(d) or validate(d):
            failures.append("validate")
        doc = DiscourseDocument(d)
        data = serialize_document(doc)
        if parse_document(data) != doc or serialize_document(parse_document(data)) != data:
            failures.append("round-trip")
        if centering_disagreements(d):
            failures.append("transition labels")
        for prev, utt in gold_states(d):
            state, _, _ = advance(prev, utt, gold_bindings(utt), d.entity_table)
            if prev is not None and state.cb is not None and state.cb not in prev.cf:
                failures.append("cb in prev.cf")
            for ci, clause in enumerate(utt.clauses):
                try:
                    res = resolve_clause(clause, prev or CenteringState(()), d.entity_table, ci)
                except UnresolvableError:
                    continue
                late = any(
                    e.kind is EventKind.REVISE and e.expression == res.subject and e.position > clause.window_end
                    for e in res.trace
                )
                if late != res.garden_path:
                    failures.append("garden path")
    detail = f"{cases} discourses, {len(failures)} failures {sorted(set(failures))}"
    return report("3 invariant suite", not failures, detail)


def criterion_generation():
    bad, checked = round_trip_failures(3)
    detail = f"{checked} (state, referent, plan) cases, {len(bad)} not felicitous"
    return report("4 generation round-trip", not bad, detail)


CRITERIA = [criterion_corpus, criterion_oracles, criterion_invariants, criterion_generation]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion, capsys):
    with capsys.disabled():
        print()
        ok = criterion()
    assert ok


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
