"""End-to-end runs: extraction, filtering, validation, scheduling and reports."""

from __future__ import annotations

import enum
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .errors import InputError, NonInteractiveWithoutAssumptions, SoundnessViolation, UnknownValue
from .filtering import (
    NlpConfig,
    StringFrequencyReport,
    ValueFrequency,
    filter_dependency_free,
    filter_nlp,
    filter_report,
    rank_string_values,
)
from .graph import DependencyGraph, EdgeStatus, Origin, export_graph, extract_original_order, extract_sub_use
from .nlp import DEFAULT_DOBJ_MODE, DobjMode, PosLexicon, VerbTaxonomy
from .scheduler import ScheduleSet, SpeedupMetrics, derive_schedules, run_parallel, speedup_metrics
from .simulator import OutcomeVector
from .suite import AppManifest, TestSuite, load_manifest, load_suite
from .validator import EventKind, ValidationState, events_to_jsonl, run_full_validation

SUMMARY_VERSION = 1


class Extraction(str, enum.Enum):
    ORIGINAL_ORDER = "original-order"
    STRING_ANALYSIS = "string-analysis"

    @property
    def label(self) -> str:
        return "Original Order" if self is Extraction.ORIGINAL_ORDER else "String Analysis"


class FilterName(str, enum.Enum):
    DEP_FREE = "dep-free"
    NLP_VERB = "nlp-verb"
    NLP_DOBJ = "nlp-dobj"
    NLP_NOUN = "nlp-noun"

    @property
    def nlp_config(self) -> NlpConfig | None:
        return {
            FilterName.NLP_VERB: NlpConfig.VERB,
            FilterName.NLP_DOBJ: NlpConfig.DOBJ,
            FilterName.NLP_NOUN: NlpConfig.NOUN,
        }.get(self)


@dataclass(frozen=True)
class RunConfig:
    suite_path: str | os.PathLike
    manifest_path: str | os.PathLike
    extraction: Extraction = Extraction.STRING_ANALYSIS
    filters: tuple[FilterName, ...] = ()
    taxonomy_path: str | None = None
    lexicon_path: str | None = None
    dobj_mode: DobjMode = DEFAULT_DOBJ_MODE
    assume_yes: frozenset[str] = frozenset()
    assume_no: frozenset[str] = frozenset()
    auto: bool = False
    include_locators: bool = False
    workers: int = 1
    out_dir: str | os.PathLike | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "extraction", Extraction(self.extraction))
        object.__setattr__(self, "filters", tuple(FilterName(f) for f in self.filters))
        object.__setattr__(self, "dobj_mode", DobjMode(self.dobj_mode))
        nlp = [f for f in self.filters if f.nlp_config is not None]
        if len(nlp) > 1:
            raise InputError(
                "NLP filters are mutually exclusive, got " + ", ".join(f.value for f in nlp)
            )
        if len(set(self.filters)) != len(self.filters):
            raise InputError("a filter is listed twice")

    @property
    def label(self) -> str:
        """Row label in the style of the evaluation table."""
        nlp = next((f for f in self.filters if f.nlp_config is not None), None)
        if nlp is not None:
            return f"NLP-{nlp.nlp_config.value.capitalize()} ({self.extraction.label})"
        if self.extraction is Extraction.STRING_ANALYSIS:
            return "String Analysis"
        return "Baseline (Original Order)"

    def to_dict(self) -> dict:
        # basenames only, so artifacts do not depend on where inputs live
        return {
            "suite": Path(self.suite_path).name,
            "manifest": Path(self.manifest_path).name,
            "extraction": self.extraction.value,
            "filters": [f.value for f in self.filters],
            "dobj_mode": self.dobj_mode.value,
            "assume_yes": sorted(self.assume_yes),
            "assume_no": sorted(self.assume_no),
            "auto": self.auto,
            "include_locators": self.include_locators,
        }


# -- dependency-free value confirmation ----------------------------------------

Prompt = Callable[[ValueFrequency, int], bool]


def confirm_values(
    report: StringFrequencyReport,
    yes: Iterable[str] = (),
    no: Iterable[str] = (),
    auto: bool = False,
    prompt: Prompt | None = None,
) -> set[str]:
    """Decide which ranked values are dependency-free.

    Values named in ``yes`` are confirmed and values named in ``no`` discarded;
    ``"*"`` in either list applies to every frequent value not named
    explicitly.  With ``auto``, values present in every test are confirmed
    without asking.  Remaining frequent values go to ``prompt``; without one
    they are discarded when any assumption was supplied, otherwise
    :class:`NonInteractiveWithoutAssumptions` is raised.
    """
    yes, no = set(yes), set(no)
    unknown = sorted(v for v in (yes | no) - {"*"} if v not in report)
    if unknown:
        raise UnknownValue(f"values not in the frequency report: {', '.join(unknown)}")
    clash = sorted((yes & no) - {"*"})
    if clash:
        raise InputError(f"values both confirmed and discarded: {', '.join(clash)}")
    universal = set(report.universal()) if auto else set()
    frequent = {e.value for e in report.frequent()}
    scripted = bool(yes or no or auto)

    confirmed: set[str] = set()
    for entry in report.entries:
        value = entry.value
        if value in yes or value in universal:
            confirmed.add(value)
        elif value in no or value not in frequent or "*" in no:
            continue
        elif "*" in yes:
            confirmed.add(value)
        elif prompt is not None:
            if prompt(entry, report.n_tests):
                confirmed.add(value)
        elif not scripted:
            raise NonInteractiveWithoutAssumptions(
                f"value {value!r} needs confirmation; pass --assume-yes/--assume-no "
                "or run on a terminal"
            )
    return confirmed


# -- pipeline --------------------------------------------------------------------


@dataclass
class PipelineResult:
    config: RunConfig
    suite: TestSuite
    manifest: AppManifest
    candidate: DependencyGraph
    filtered: DependencyGraph
    ranking: StringFrequencyReport | None
    confirmed: set[str]
    state: ValidationState
    schedules: ScheduleSet
    metrics: SpeedupMetrics
    outcomes: list[OutcomeVector] = field(default_factory=list)
    violation: SoundnessViolation | None = None

    @property
    def final(self) -> DependencyGraph:
        return self.state.graph

    def summary(self) -> dict:
        return summarize(self)


def extract(config: RunConfig, suite: TestSuite, manifest: AppManifest) -> DependencyGraph:
    if config.extraction is Extraction.ORIGINAL_ORDER:
        return extract_original_order(suite)
    return extract_sub_use(suite, manifest.catalog, config.include_locators)


Confirm = Callable[[StringFrequencyReport], set[str]]


def scripted_confirm(config: RunConfig) -> Confirm:
    """Confirmation driven only by the config's assumption flags."""
    return lambda report: confirm_values(
        report, config.assume_yes, config.assume_no, config.auto
    )


def apply_filters(
    config: RunConfig,
    suite: TestSuite,
    graph: DependencyGraph,
    confirm: Confirm | None = None,
) -> tuple[DependencyGraph, StringFrequencyReport | None, set[str]]:
    confirm = confirm or scripted_confirm(config)
    ranking = None
    confirmed: set[str] = set()
    for name in config.filters:
        if name is FilterName.DEP_FREE:
            ranking = rank_string_values(graph, suite)
            confirmed = confirm(ranking)
            graph = filter_dependency_free(graph, ranking, confirmed)
        else:
            graph = filter_nlp(
                graph,
                suite,
                name.nlp_config,
                PosLexicon.load(config.lexicon_path),
                VerbTaxonomy.load(config.taxonomy_path),
                config.dobj_mode,
            )
    return graph, ranking, confirmed


def load_inputs(config: RunConfig) -> tuple[TestSuite, AppManifest]:
    manifest = load_manifest(config.manifest_path)
    suite = load_suite(config.suite_path, manifest.catalog)
    return suite, manifest


def run_pipeline(config: RunConfig, confirm: Confirm | None = None) -> PipelineResult:
    """Run every stage; a failing derived schedule is recorded, not raised."""
    suite, manifest = load_inputs(config)
    candidate = extract(config, suite, manifest)
    filtered, ranking, confirmed = apply_filters(config, suite, candidate, confirm)
    state = run_full_validation(suite, manifest, filtered)
    schedules = derive_schedules(state.graph, suite, manifest)
    result = PipelineResult(
        config=config,
        suite=suite,
        manifest=manifest,
        candidate=candidate,
        filtered=filtered,
        ranking=ranking,
        confirmed=confirmed,
        state=state,
        schedules=schedules,
        metrics=speedup_metrics(schedules),
    )
    result.outcomes = run_parallel(schedules, suite, manifest, workers=config.workers, strict=False)
    for schedule, outcome in zip(schedules.schedules, result.outcomes):
        failed = outcome.failed()
        if failed:
            result.violation = SoundnessViolation(schedule.tests, failed[0])
            break
    return result


def _run_costs(state: ValidationState, manifest: AppManifest) -> dict[str, float]:
    runs: Counter[str] = Counter()
    cost: Counter[str] = Counter()
    for event in state.events:
        if event.kind is EventKind.SCHEDULE_RUN:
            bucket = "validation"
        elif event.kind in (EventKind.DISCONNECTED_RUN, EventKind.SWEEP_RUN):
            bucket = "disconnected"
        else:
            continue
        runs[bucket] += 1
        cost[bucket] += sum(manifest.cost(t) for t in event.payload["schedule"])
    return {
        "validation_runs": runs["validation"],
        "disconnected_runs": runs["disconnected"],
        "total_runs": runs["validation"] + runs["disconnected"],
        "validation_cost": cost["validation"],
        "disconnected_cost": cost["disconnected"],
        "total_cost": cost["validation"] + cost["disconnected"],
    }


def summarize(result: PipelineResult) -> dict:
    """Counts shaped like the evaluation table.

    False = To Validate - Total, i.e. what validation discarded net of what
    recovery added.
    """
    extracted = len(result.candidate)
    filtered = len(result.filtered.edges(EdgeStatus.REMOVED))
    manifest_edges = result.final.edges(EdgeStatus.MANIFEST)
    by_origin = Counter(e.origin for e in manifest_edges)
    to_validate = extracted - filtered
    total = len(manifest_edges)
    return {
        "format_version": SUMMARY_VERSION,
        "label": result.config.label,
        "config": result.config.to_dict(),
        "tests": len(result.suite),
        "extracted": extracted,
        "filtered": filtered,
        "to_validate": to_validate,
        "false": to_validate - total,
        "validated": by_origin[Origin.EXTRACTED],
        "recovered": by_origin[Origin.RECOVERED],
        "recovered_disconnected": by_origin[Origin.RECOVERED_DISCONNECTED],
        "total_praw": total,
        **_run_costs(result.state, result.manifest),
        "schedules": len(result.schedules),
        "worst_case_speedup": round(result.metrics.worst_case, 4),
        "average_speedup": round(result.metrics.average_case, 4),
        "confirmed_values": sorted(result.confirmed),
        "soundness_violation": (
            None
            if result.violation is None
            else {"schedule": list(result.violation.schedule), "test": result.violation.test}
        ),
    }


COLUMNS = (
    ("label", "Configuration"),
    ("extracted", "Extracted"),
    ("filtered", "Filtered"),
    ("to_validate", "To Validate"),
    ("false", "False"),
    ("validated", "Validated"),
    ("recovered", "Recovered"),
    ("recovered_disconnected", "Recovered (Disc.)"),
    ("total_praw", "Total PRAW"),
    ("total_runs", "Runs"),
    ("total_cost", "Cost"),
    ("saving", "Saving (%)"),
    ("schedules", "Schedules (#)"),
    ("worst_case_speedup", "Worst-case"),
    ("average_speedup", "Average"),
)


def with_savings(rows: list[dict]) -> list[dict]:
    """Add the saving of each row's validation cost over the baseline row."""
    base = next((r for r in rows if r["label"].startswith("Baseline")), None)
    out = []
    for row in rows:
        row = dict(row)
        if base is None or row["label"] == base["label"] or not base["total_cost"]:
            row["saving"] = None
        else:
            row["saving"] = round(100 * (1 - row["total_cost"] / base["total_cost"]))
        out.append(row)
    return out


def _cell(key: str, value) -> str:
    if value is None:
        return "-"
    if key in ("worst_case_speedup", "average_speedup"):
        return f"{value:.1f}x"
    if key == "saving":
        return f"{value}%"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def format_table(rows: list[dict]) -> str:
    rows = with_savings(rows)
    table = [[title for _, title in COLUMNS]]
    table += [[_cell(key, row.get(key)) for key, _ in COLUMNS] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(COLUMNS))]
    lines = []
    for i, r in enumerate(table):
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


ARTIFACTS = (
    "candidate_graph.json",
    "filter_report.json",
    "events.jsonl",
    "final_graph.json",
    "final_graph.dot",
    "schedules.json",
    "metrics.json",
    "summary.json",
    "summary.txt",
)


def write_artifacts(result: PipelineResult, out_dir: str | os.PathLike) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = result.summary()
    contents = {
        "candidate_graph.json": export_graph(result.candidate, "json"),
        "filter_report.json": _dump(
            {
                "ranking": result.ranking.to_list() if result.ranking else [],
                "confirmed": sorted(result.confirmed),
                "removed": filter_report(result.filtered),
            }
        ),
        "events.jsonl": events_to_jsonl(result.state.events),
        "final_graph.json": export_graph(result.final, "json"),
        "final_graph.dot": export_graph(result.final, "dot"),
        "schedules.json": _dump(result.schedules.to_list()),
        "metrics.json": _dump(result.metrics.to_dict()),
        "summary.json": _dump(summary),
        "summary.txt": format_table([summary]),
    }
    written = []
    for name in ARTIFACTS:
        path = out / name
        path.write_text(contents[name], encoding="utf-8")
        written.append(path)
    return written
