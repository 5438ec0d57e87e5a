"""Deterministic execution of test schedules against a manifest-defined store.

This stands in for running the suite in a browser: every statement's effects
(from the manifest) read, write or delete entity keys of a persistent store
that starts from the manifest's initial state for each schedule.
"""

from __future__ import annotations

import enum
import logging
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BaselineFailure, UnknownTestName
from .suite import AppManifest, EffectKind, TestCase, TestSuite

log = logging.getLogger(__name__)


class Outcome(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_EXECUTED = "NOT_EXECUTED"


@dataclass(frozen=True)
class Schedule:
    tests: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.tests)) != len(self.tests):
            raise ValueError(f"schedule repeats a test: {self.tests}")

    def __iter__(self) -> Iterator[str]:
        return iter(self.tests)

    def __len__(self) -> int:
        return len(self.tests)

    def __contains__(self, name: object) -> bool:
        return name in self.tests

    def __str__(self) -> str:
        return "<" + ", ".join(self.tests) + ">"

    @classmethod
    def of(cls, names: Iterable[str]) -> "Schedule":
        return cls(tuple(names))


@dataclass(frozen=True)
class OutcomeVector:
    """Result of every suite test for one schedule, in suite order."""

    results: Mapping[str, Outcome]
    schedule: Schedule

    def __getitem__(self, name: str) -> Outcome:
        return self.results[name]

    def failed(self) -> list[str]:
        """Failed tests, in schedule order."""
        return [t for t in self.schedule if self.results[t] is Outcome.FAIL]

    def first_deviation(self, expected: "OutcomeVector") -> str | None:
        """First executed test (schedule order) whose result differs from ``expected``."""
        for name in self.schedule:
            if self.results[name] is not expected.results[name]:
                return name
        return None

    def matches(self, expected: "OutcomeVector") -> bool:
        return self.first_deviation(expected) is None

    def to_dict(self) -> dict[str, str]:
        return {name: outcome.value for name, outcome in self.results.items()}


class SimState:
    """Persistent store: entity key -> last written value."""

    def __init__(self, initial: Mapping[str, str]):
        self.entities: dict[str, str] = dict(initial)

    def __contains__(self, key: str) -> bool:
        return key in self.entities


def _run_test(test: TestCase, manifest: AppManifest, state: SimState) -> Outcome:
    for stmt in test.statements:
        effects = manifest.effects_for(stmt)
        if not effects:
            log.debug("%s %s %s -> no effect", test.name, stmt.action, stmt.locator)
        for effect in effects:
            key = effect.resolve(stmt.args)
            if effect.kind is EffectKind.WRITE:
                state.entities[key] = stmt.args[0] if stmt.args else ""
                result = "written"
            elif key not in state:
                log.debug("%s %s %s %s -> missing", test.name, stmt.action, effect.kind.value, key)
                return Outcome.FAIL
            elif effect.kind is EffectKind.DELETE:
                del state.entities[key]
                result = "deleted"
            else:
                result = "found"
            log.debug("%s %s %s %s -> %s", test.name, stmt.action, effect.kind.value, key, result)
    return Outcome.PASS


def execute_schedule(
    suite: TestSuite, manifest: AppManifest, schedule: Schedule | Sequence[str]
) -> OutcomeVector:
    """Run ``schedule`` from a fresh store; a failing test does not stop the schedule."""
    if not isinstance(schedule, Schedule):
        schedule = Schedule.of(schedule)
    for name in schedule:
        if name not in suite:
            raise UnknownTestName(f"schedule references unknown test {name!r}")
    state = SimState(manifest.initial_state)
    results = {name: Outcome.NOT_EXECUTED for name in suite.names}
    for name in schedule:
        results[name] = _run_test(suite.get(name), manifest, state)
    return OutcomeVector(results, schedule)


def baseline_outcomes(suite: TestSuite, manifest: AppManifest) -> OutcomeVector:
    outcomes = execute_schedule(suite, manifest, Schedule(suite.names))
    failed = outcomes.failed()
    if failed:
        raise BaselineFailure(failed)
    return outcomes


class Simulator:
    """Schedule executor bound to one suite and manifest.

    Keeps run statistics (number of schedules, simulated cost) and caches the
    original-order baseline.  Safe to call from several threads: each call owns
    its store.
    """

    def __init__(self, suite: TestSuite, manifest: AppManifest):
        self.suite = suite
        self.manifest = manifest
        self.runs = 0
        self.cost = 0.0
        self._lock = threading.Lock()

    @cached_property
    def baseline(self) -> OutcomeVector:
        return baseline_outcomes(self.suite, self.manifest)

    def __call__(self, schedule: Schedule | Sequence[str]) -> OutcomeVector:
        outcomes = execute_schedule(self.suite, self.manifest, schedule)
        with self._lock:
            self.runs += 1
            self.cost += sum(self.manifest.cost(t) for t in outcomes.schedule)
        return outcomes

    def runtime(self, names: Iterable[str]) -> float:
        return sum(self.manifest.cost(t) for t in names)
