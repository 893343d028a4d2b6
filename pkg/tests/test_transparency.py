"""Observational transparency: instrumented evaluation must agree with the
clean (uninstrumented) interpreter on status, return value, and host output
for every fixture without replacements."""

from __future__ import annotations

import pytest

from conftest import FIXTURE_SESSIONS, make_session
from oracles import clean_run, normalize_snapshot_ids

# Replacement fixtures change behavior by design; the clean route cannot be
# their oracle. Everything else must agree 100%.
DIFFERENTIAL = {key: mods for key, mods in FIXTURE_SESSIONS.items()
                if key not in ("temperature", "throwfix")}
DIFFERENTIAL["infinite"] = ("infinite",)


@pytest.mark.parametrize("fixture_key", sorted(DIFFERENTIAL))
def test_instrumented_matches_clean_interpreter(fixture_key):
    modules = list(DIFFERENTIAL[fixture_key])
    budget = 250.0 if fixture_key == "infinite" else 2000.0
    session = make_session(*modules, budget_ms=budget)
    session.evaluate_all()
    instrumented = {o.example_id: o for o in session.last_evaluation.outcomes}

    clean, _ = clean_run(modules, budget_ms=budget)
    assert set(instrumented) == {c.example_id for c in clean}

    for expected in clean:
        actual = instrumented[expected.example_id]
        assert actual.status == expected.status, expected.example_id
        assert actual.output == expected.output, expected.example_id
        actual_return = (normalize_snapshot_ids(actual.return_snapshot.to_json())
                         if actual.return_snapshot else None)
        expected_return = normalize_snapshot_ids(expected.return_json)
        assert actual_return == expected_return, expected.example_id
        if expected.status == "error":
            assert actual.error_message == expected.error_message


def test_differential_suite_covers_the_corpus():
    # a regression guard: the suite must keep exercising the interesting fixtures
    assert {"simple", "search_steps", "recursive", "errors", "locmap",
            "nested", "powers", "cycle", "diamond", "complex", "infinite"} <= set(DIFFERENTIAL)
