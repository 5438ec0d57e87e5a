from __future__ import annotations

import json
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webtestdeps.errors import BaselineFailure, UnknownTestName
from webtestdeps.generate import random_suite
from webtestdeps.simulator import Outcome, Schedule, Simulator, baseline_outcomes, execute_schedule
from webtestdeps.suite import parse_manifest, parse_suite

from conftest import T

STORE = parse_manifest(json.dumps({
    "actions": {"put": 1, "get": 1, "drop": 1, "noop": 0},
    "effects": [
        {"action": "put", "locator": "*", "effects": [{"kind": "WRITE", "key": "k:{arg0}"}]},
        {"action": "get", "locator": "*", "effects": [{"kind": "READ", "key": "k:{arg0}"}]},
        {"action": "drop", "locator": "*", "effects": [{"kind": "DELETE", "key": "k:{arg0}"}]},
    ],
    "costs": {"writer": 3},
}))


def suite(text: str):
    return parse_suite(text, STORE.catalog)


class TestExecuteSchedule:
    def test_fig2_schedules_pass(self, claroline_suite, claroline_manifest):
        for sched in [(1, 2), (1, 3), (1, 4, 6), (4, 5)]:
            out = execute_schedule(claroline_suite, claroline_manifest, [T[i] for i in sched])
            assert out.failed() == []

    def test_search_user_alone_fails(self, claroline_suite, claroline_manifest):
        out = execute_schedule(claroline_suite, claroline_manifest, [T[2]])
        assert out[T[2]] is Outcome.FAIL
        assert out[T[1]] is Outcome.NOT_EXECUTED

    def test_empty_schedule(self, claroline_suite, claroline_manifest):
        out = execute_schedule(claroline_suite, claroline_manifest, [])
        assert set(out.to_dict().values()) == {"NOT_EXECUTED"}

    def test_unknown_test(self, claroline_suite, claroline_manifest):
        with pytest.raises(UnknownTestName):
            execute_schedule(claroline_suite, claroline_manifest, ["ghostTest"])

    def test_duplicate_in_schedule(self):
        with pytest.raises(ValueError):
            Schedule(("a", "a"))

    def test_fail_soft_and_partial_mutations_persist(self):
        s = suite(
            "TEST broken\nput x \"a\"\nget x \"missing\"\nput x \"b\"\n"
            "TEST reader\nget x \"a\"\nget x \"b\"\n"
        )
        out = execute_schedule(s, STORE, ["broken", "reader"])
        assert out["broken"] is Outcome.FAIL
        # "a" was written before the failure point, "b" was not
        assert out["reader"] is Outcome.FAIL
        out = execute_schedule(
            suite("TEST broken\nput x \"a\"\nget x \"missing\"\nTEST reader\nget x \"a\"\n"),
            STORE,
            ["broken", "reader"],
        )
        assert out["reader"] is Outcome.PASS

    def test_delete_of_absent_key_fails(self):
        s = suite('TEST d\ndrop x "gone"\n')
        assert execute_schedule(s, STORE, ["d"])["d"] is Outcome.FAIL

    def test_delete_then_read_fails(self):
        s = suite('TEST a\nput x "v"\nTEST b\ndrop x "v"\nTEST c\nget x "v"\n')
        out = execute_schedule(s, STORE, ["a", "b", "c"])
        assert out.failed() == ["c"]
        assert execute_schedule(s, STORE, ["a", "c"]).failed() == []

    def test_trace_logging(self, caplog):
        s = suite('TEST a\nput x "v"\nnoop y\n')
        with caplog.at_level(logging.DEBUG, logger="webtestdeps.simulator"):
            execute_schedule(s, STORE, ["a"])
        messages = [r.getMessage() for r in caplog.records]
        assert messages == ["a put WRITE k:v -> written", "a noop y -> no effect"]


class TestBaseline:
    def test_fixture_baseline_passes(self, claroline_suite, claroline_manifest):
        out = baseline_outcomes(claroline_suite, claroline_manifest)
        assert set(out.to_dict().values()) == {"PASS"}

    def test_baseline_failure(self):
        s = suite('TEST a\nput x "v"\nTEST b\nget x "never"\n')
        with pytest.raises(BaselineFailure) as err:
            baseline_outcomes(s, STORE)
        assert err.value.failed == ["b"]

    def test_write_only_single_test(self):
        assert baseline_outcomes(suite('TEST a\nput x "v"\n'), STORE)["a"] is Outcome.PASS


class TestSimulator:
    def test_counts_runs_and_cost(self):
        s = suite('TEST writer\nput x "v"\nTEST reader\nget x "v"\n')
        sim = Simulator(s, STORE)
        sim(["writer", "reader"])
        sim(["reader"])
        assert sim.runs == 2
        assert sim.cost == 3 + 1 + 1
        assert sim.runtime(s.names) == 4

    def test_praw_realizability(self):
        s = suite('TEST a\nput x "v"\nTEST b\nget x "v"\n')
        assert execute_schedule(s, STORE, ["a", "b"]).failed() == []
        assert execute_schedule(s, STORE, ["b"]).failed() == ["b"]


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000), st.randoms(use_true_random=False))
    def test_deterministic_and_isolated(self, seed, rnd):
        s, m = random_suite(seed)
        names = list(s.names)
        rnd.shuffle(names)
        sched = names[: rnd.randint(0, len(names))]
        first = execute_schedule(s, m, sched)
        execute_schedule(s, m, list(s.names))  # unrelated run in between
        assert execute_schedule(s, m, sched) == first

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_generated_baselines_pass(self, seed):
        s, m = random_suite(seed)
        assert baseline_outcomes(s, m).failed() == []
