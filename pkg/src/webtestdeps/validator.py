"""Dynamic validation of candidate dependencies with missing-dependency recovery.

Candidate edges are validated one at a time, latest dependent first, by running
a schedule in which the edge is inverted (the prerequisite is left out).  When
the dependent still fails with the edge respected, the graph is missing a
dependency and the failing test is connected to every earlier test that did
not run.  After the worklist drains, tests without prerequisites are run in
isolation (and through the schedules that contain them) to catch dependencies
shadowed by edges removed during validation.  Both phases repeat until the
graph stops changing.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import EmptyWorklist, InversionImpossible, IterationBudgetExceeded
from .graph import ACTIVE, DependencyGraph, Edge, EdgeStatus, Origin
from .scheduler import schedules_of
from .simulator import OutcomeVector, Schedule, Simulator
from .suite import AppManifest, TestSuite

EVENT_FORMAT_VERSION = 1

Executor = Callable[[Schedule], OutcomeVector]

# reasons recorded on edges resolved by the validator
VALIDATED = "validated"
INVERSION_PASSED = "inversion-passed"
TRANSITIVE = "transitive"
UNRESOLVED = "unresolved"


class EventKind(str, enum.Enum):
    SELECTED = "SELECTED"
    SCHEDULE_RUN = "SCHEDULE_RUN"
    MARK_MANIFEST = "MARK_MANIFEST"
    MARK_REMOVED = "MARK_REMOVED"
    RECOVERED_EDGE = "RECOVERED_EDGE"
    DISCONNECTED_RUN = "DISCONNECTED_RUN"
    SWEEP_RUN = "SWEEP_RUN"


RUN_KINDS = frozenset({EventKind.SCHEDULE_RUN, EventKind.DISCONNECTED_RUN, EventKind.SWEEP_RUN})


@dataclass(frozen=True)
class ValidationEvent:
    kind: EventKind
    payload: dict

    def to_dict(self) -> dict:
        return {"v": EVENT_FORMAT_VERSION, "kind": self.kind.value, **self.payload}

    @classmethod
    def from_dict(cls, doc: dict) -> "ValidationEvent":
        payload = {k: v for k, v in doc.items() if k not in ("v", "kind")}
        return cls(EventKind(doc["kind"]), payload)

    def edge(self) -> tuple[str, str]:
        return (self.payload["dependent"], self.payload["prerequisite"])


@dataclass
class ValidationState:
    suite: TestSuite
    graph: DependencyGraph
    expected: OutcomeVector
    events: list[ValidationEvent] = field(default_factory=list)
    steps: int = 0
    _passed: set[tuple[str, ...]] = field(default_factory=set, repr=False)

    @property
    def pending(self) -> list[Edge]:
        """CANDIDATE edges, latest dependent first, then latest prerequisite."""
        pos = self.graph.position
        return sorted(
            self.graph.edges(EdgeStatus.CANDIDATE),
            key=lambda e: (-pos(e.dependent), -pos(e.prerequisite)),
        )

    def log(self, kind: EventKind, **payload) -> None:
        self.events.append(ValidationEvent(kind, payload))

    def run(self, executor: Executor, schedule: Schedule, kind: EventKind, **extra) -> OutcomeVector:
        outcomes = executor(schedule)
        failed = outcomes.failed()
        if outcomes.matches(self.expected):
            self._passed.add(schedule.tests)
        self.log(kind, schedule=list(schedule.tests), failed=failed, **extra)
        return outcomes

    def mark(self, edge: Edge, status: EdgeStatus, reason: str) -> None:
        edge.set_status(status, reason)
        kind = EventKind.MARK_MANIFEST if status is EdgeStatus.MANIFEST else EventKind.MARK_REMOVED
        self.log(kind, dependent=edge.dependent, prerequisite=edge.prerequisite, reason=reason)

    def connect(self, test: str, candidates: Iterable[str], origin: Origin) -> list[Edge]:
        """Add CANDIDATE edges ``test -> c`` for pairs not yet in the graph."""
        added = []
        for prerequisite in candidates:
            if (test, prerequisite) in self.graph:
                continue
            edge = self.graph.add_edge(test, prerequisite, origin=origin)
            added.append(edge)
            self.log(
                EventKind.RECOVERED_EDGE,
                dependent=test,
                prerequisite=prerequisite,
                origin=origin.value,
            )
        return added

    def runs(self) -> int:
        return sum(1 for e in self.events if e.kind in RUN_KINDS)


def select_target(state: ValidationState, skip: Iterable[tuple[str, str]] = ()) -> Edge:
    """Source-first choice: latest dependent, ties broken by latest prerequisite."""
    skip = set(skip)
    for edge in state.pending:
        if edge.pair not in skip:
            return edge
    raise EmptyWorklist("no candidate edge left to validate")


def inversion_schedule(graph: DependencyGraph, target: Edge) -> Schedule:
    """Dependent's remaining transitive prerequisites, then the dependent."""
    before = graph.closure(target.dependent, ACTIVE, skip=target.pair)
    if target.prerequisite in before:
        raise InversionImpossible(
            f"{target.prerequisite} is still a transitive prerequisite of {target.dependent}"
        )
    return Schedule(graph.in_original_order(before) + (target.dependent,))


def no_inversion_schedule(graph: DependencyGraph, target: Edge) -> Schedule:
    before = graph.closure(target.dependent, ACTIVE)
    before.add(target.prerequisite)
    return Schedule(graph.in_original_order(before) + (target.dependent,))


def validate_step(state: ValidationState, executor: Executor) -> ValidationState:
    """Validate one candidate edge, recovering missing dependencies on failure.

    A candidate that cannot be inverted because another path still leads to its
    prerequisite is skipped while that path contains unvalidated edges, and
    marked MANIFEST (reason ``transitive``) once the path is fully manifest.
    """
    if not state.pending:
        raise EmptyWorklist("no candidate edge left to validate")
    state.steps += 1
    graph = state.graph
    blocked: set[tuple[str, str]] = set()
    while True:
        target = select_target(state, blocked)
        try:
            inverted = inversion_schedule(graph, target)
            break
        except InversionImpossible:
            manifest_path = graph.closure(
                target.dependent, {EdgeStatus.MANIFEST}, skip=target.pair
            )
            if target.prerequisite in manifest_path:
                state.log(EventKind.SELECTED, dependent=target.dependent,
                          prerequisite=target.prerequisite)
                state.mark(target, EdgeStatus.MANIFEST, TRANSITIVE)
                return state
            blocked.add(target.pair)

    state.log(EventKind.SELECTED, dependent=target.dependent, prerequisite=target.prerequisite)
    outcome = state.run(executor, inverted, EventKind.SCHEDULE_RUN, inverted=True)
    if outcome.matches(state.expected):
        state.mark(target, EdgeStatus.REMOVED, INVERSION_PASSED)
        return state

    kept = no_inversion_schedule(graph, target)
    outcome = state.run(executor, kept, EventKind.SCHEDULE_RUN, inverted=False)
    failed = outcome.first_deviation(state.expected)
    if failed is None:
        state.mark(target, EdgeStatus.MANIFEST, VALIDATED)
        return state

    candidates = [t for t in state.suite.preceding(failed) if t not in kept]
    if not state.connect(failed, candidates, Origin.RECOVERED):
        # every candidate pair was already refuted; keep the edge rather than loop
        state.mark(target, EdgeStatus.MANIFEST, UNRESOLVED)
    return state


def schedules_containing(graph: DependencyGraph, test: str) -> list[Schedule]:
    return [s for s in schedules_of(graph) if test in s]


def disconnected_tests(graph: DependencyGraph) -> list[str]:
    """Tests after the first one that have no prerequisite (isolated or sink-only)."""
    return [t for t in graph.order[1:] if not graph.prerequisites(t)]


def recover_disconnected(state: ValidationState, executor: Executor) -> ValidationState:
    graph = state.graph
    for test in disconnected_tests(graph):
        alone = Schedule((test,))
        outcome = state.run(executor, alone, EventKind.DISCONNECTED_RUN, test=test)
        if outcome.first_deviation(state.expected) is not None:
            state.connect(test, state.suite.preceding(test), Origin.RECOVERED_DISCONNECTED)
            continue
        if not graph.dependents(test):
            continue
        for schedule in schedules_containing(graph, test):
            outcome = state.run(executor, schedule, EventKind.DISCONNECTED_RUN, test=test)
            for failed in outcome.failed():
                state.connect(failed, state.suite.preceding(failed), Origin.RECOVERED_DISCONNECTED)
    return state


def sweep_schedules(state: ValidationState, executor: Executor) -> ValidationState:
    """Run every schedule of the current graph not yet seen passing.

    Catches missing dependencies shadowed deeper than the sink-only tests
    that :func:`recover_disconnected` inspects.
    """
    for schedule in schedules_of(state.graph):
        if schedule.tests in state._passed:
            continue
        outcome = state.run(executor, schedule, EventKind.SWEEP_RUN)
        for failed in outcome.failed():
            state.connect(failed, state.suite.preceding(failed), Origin.RECOVERED_DISCONNECTED)
    return state


def iteration_budget(n_tests: int) -> int:
    return 4 * n_tests * n_tests


def run_full_validation(
    suite: TestSuite,
    manifest: AppManifest,
    initial_graph: DependencyGraph,
    executor: Executor | None = None,
    sweep: bool = True,
) -> ValidationState:
    """Validate ``initial_graph`` to a fixpoint.

    REMOVED edges of the input (filtered ones) are left out, so recovery may
    add those pairs back.  Raises :class:`BaselineFailure` when the suite does
    not pass in its original order.
    """
    simulator = Simulator(suite, manifest)
    expected = simulator.baseline
    executor = executor or simulator
    state = ValidationState(suite, initial_graph.active_copy(), expected)
    budget = iteration_budget(len(suite))

    def tick() -> None:
        if state.steps > budget:
            raise IterationBudgetExceeded(
                f"validation did not converge within {budget} steps "
                f"({len(state.pending)} candidates pending)"
            )

    while True:
        while state.pending:
            validate_step(state, executor)
            tick()
        before = len(state.graph)
        state.steps += 1
        recover_disconnected(state, executor)
        tick()
        if len(state.graph) != before:
            continue
        if not sweep:
            break
        state.steps += 1
        sweep_schedules(state, executor)
        tick()
        if len(state.graph) == before:
            break
    return state


def replay_events(initial_graph: DependencyGraph, events: Sequence[ValidationEvent]) -> DependencyGraph:
    """Rebuild the validated graph from the initial graph and an event log."""
    graph = initial_graph.active_copy()
    for event in events:
        if event.kind is EventKind.RECOVERED_EDGE:
            graph.add_edge(*event.edge(), origin=Origin(event.payload["origin"]))
        elif event.kind is EventKind.MARK_MANIFEST:
            graph.get(*event.edge()).set_status(EdgeStatus.MANIFEST, event.payload["reason"])
        elif event.kind is EventKind.MARK_REMOVED:
            graph.get(*event.edge()).set_status(EdgeStatus.REMOVED, event.payload["reason"])
    return graph


def events_to_jsonl(events: Iterable[ValidationEvent]) -> str:
    return "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in events)


def events_from_jsonl(text: str) -> list[ValidationEvent]:
    return [ValidationEvent.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
