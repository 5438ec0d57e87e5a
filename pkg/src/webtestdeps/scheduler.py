"""Parallel schedules from a validated dependency graph, and speed-up metrics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import fmean
from typing import Callable

from .errors import EmptyScheduleSet, GraphNotValidated, SoundnessViolation
from .graph import ACTIVE, DependencyGraph, EdgeStatus
from .simulator import OutcomeVector, Schedule, execute_schedule
from .suite import AppManifest, TestSuite


def schedules_of(graph: DependencyGraph) -> list[Schedule]:
    """One schedule per sink (a test nothing depends on): the sink preceded by
    its transitive prerequisites in original order.  Isolated tests give
    single-test schedules."""
    schedules = []
    for test in graph.order:
        if graph.dependents(test):
            continue
        before = graph.closure(test, ACTIVE)
        schedules.append(Schedule(graph.in_original_order(before) + (test,)))
    return schedules


@dataclass(frozen=True)
class ScheduleSet:
    schedules: tuple[Schedule, ...]
    runtimes: tuple[float, ...]
    original_runtime: float

    def __len__(self) -> int:
        return len(self.schedules)

    def to_list(self) -> list[list[str]]:
        return [list(s.tests) for s in self.schedules]


@dataclass(frozen=True)
class SpeedupMetrics:
    worst_case: float
    average_case: float
    original_runtime: float
    worst_runtime: float
    average_runtime: float
    n_schedules: int

    def to_dict(self) -> dict:
        return {
            "runtime_original": self.original_runtime,
            "schedules": self.n_schedules,
            "worst_case_runtime": self.worst_runtime,
            "worst_case_speedup": self.worst_case,
            "average_runtime": self.average_runtime,
            "average_speedup": self.average_case,
        }


def derive_schedules(
    graph: DependencyGraph, suite: TestSuite, manifest: AppManifest | None = None
) -> ScheduleSet:
    pending = graph.edges(EdgeStatus.CANDIDATE)
    if pending:
        raise GraphNotValidated(f"{len(pending)} edge(s) still CANDIDATE, e.g. {pending[0]}")
    cost = manifest.cost if manifest is not None else (lambda _name: 1.0)
    schedules = schedules_of(graph)
    return ScheduleSet(
        schedules=tuple(schedules),
        runtimes=tuple(sum(cost(t) for t in s) for s in schedules),
        original_runtime=sum(cost(t) for t in suite.names),
    )


def speedup_metrics(schedule_set: ScheduleSet) -> SpeedupMetrics:
    """Original runtime over the slowest schedule (worst case) and over the
    mean schedule runtime (average case)."""
    if not schedule_set.runtimes:
        raise EmptyScheduleSet("no schedules to compare against")
    if min(schedule_set.runtimes) <= 0 or schedule_set.original_runtime <= 0:
        raise ValueError("runtimes must be positive")
    worst = max(schedule_set.runtimes)
    mean = fmean(schedule_set.runtimes)
    return SpeedupMetrics(
        worst_case=schedule_set.original_runtime / worst,
        average_case=schedule_set.original_runtime / mean,
        original_runtime=schedule_set.original_runtime,
        worst_runtime=worst,
        average_runtime=mean,
        n_schedules=len(schedule_set.runtimes),
    )


def run_parallel(
    schedule_set: ScheduleSet,
    suite: TestSuite,
    manifest: AppManifest,
    executor: Callable[[Schedule], OutcomeVector] | None = None,
    workers: int = 1,
    strict: bool = True,
) -> list[OutcomeVector]:
    """Execute every schedule on its own fresh store.

    With ``strict`` the first failing schedule (in set order) raises
    :class:`SoundnessViolation`.
    """
    run = executor or (lambda s: execute_schedule(suite, manifest, s))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, schedule_set.schedules))
    else:
        results = [run(s) for s in schedule_set.schedules]
    if strict:
        for schedule, outcome in zip(schedule_set.schedules, results):
            failed = outcome.failed()
            if failed:
                raise SoundnessViolation(schedule.tests, failed[0])
    return results
