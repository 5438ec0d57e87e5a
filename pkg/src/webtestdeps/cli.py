"""Command-line interface.

Exit codes: 0 on success, 1 on invalid input (or any other tool error), 2 when
a derived schedule fails under the simulator.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import __version__
from .errors import SchemaError, SoundnessViolation, WebTestDepsError
from .filtering import StringFrequencyReport, ValueFrequency, filter_report
from .generate import GeneratorConfig, random_suite
from .graph import DependencyGraph, export_graph, import_graph
from .nlp import LEXICON_ENV, TAXONOMY_ENV, DobjMode, PosLexicon, VerbTaxonomy, analyze_name
from .pipeline import (
    Extraction,
    FilterName,
    RunConfig,
    apply_filters,
    confirm_values,
    extract,
    format_table,
    load_inputs,
    run_pipeline,
    write_artifacts,
)
from .scheduler import derive_schedules, run_parallel, speedup_metrics
from .suite import manifest_to_dict, serialize_suite
from .validator import events_to_jsonl, run_full_validation

log = logging.getLogger("webtestdeps")


# -- confirmation ----------------------------------------------------------------


def terminal_prompt(stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout) -> Callable[[ValueFrequency, int], bool]:
    def ask(entry: ValueFrequency, n_tests: int) -> bool:
        stdout.write(
            f"  {entry.value!r} appears in {entry.test_count}/{n_tests} tests "
            f"({len(entry.edge_refs)} edges). Dependency-free? [y/N] "
        )
        stdout.flush()
        return stdin.readline().strip().lower() in ("y", "yes")

    return ask


def cmd_confirm_values(
    report: StringFrequencyReport,
    assume_yes: Sequence[str] = (),
    assume_no: Sequence[str] = (),
    auto: bool = False,
    prompt: Callable[[ValueFrequency, int], bool] | None = None,
    out: TextIO = sys.stderr,
) -> set[str]:
    """Show the ranked values and return those confirmed as dependency-free."""
    frequent = report.frequent()
    if frequent:
        out.write("String values shared by candidate dependencies:\n")
        for entry in frequent:
            out.write(f"  {entry.test_count:>3}/{report.n_tests}  {entry.value}\n")
    confirmed = confirm_values(report, assume_yes, assume_no, auto, prompt)
    out.write(f"Dependency-free values: {', '.join(sorted(confirmed)) or '(none)'}\n")
    return confirmed


def _confirmer(config: RunConfig):
    """Confirmation callback: scripted flags, plus prompting on a terminal."""
    prompt = terminal_prompt() if sys.stdin.isatty() else None
    return lambda report: cmd_confirm_values(
        report, config.assume_yes, config.assume_no, config.auto, prompt
    )


# -- helpers ---------------------------------------------------------------------


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_graph(path: str) -> DependencyGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return import_graph(text)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None


def _config(args: argparse.Namespace, **overrides) -> RunConfig:
    values = dict(
        suite_path=args.suite,
        manifest_path=args.manifest,
        extraction=getattr(args, "extract", Extraction.STRING_ANALYSIS.value),
        filters=tuple(getattr(args, "filter", None) or ()),
        taxonomy_path=getattr(args, "taxonomy", None),
        lexicon_path=getattr(args, "lexicon", None),
        dobj_mode=getattr(args, "dobj_mode", DobjMode.LAST_NOUN_OF_LEADING_COMPOUND.value),
        assume_yes=frozenset(getattr(args, "assume_yes", None) or ()),
        assume_no=frozenset(getattr(args, "assume_no", None) or ()),
        auto=getattr(args, "auto", False),
        include_locators=getattr(args, "include_locators", False),
        workers=getattr(args, "workers", 1),
    )
    values.update(overrides)
    return RunConfig(**values)


def _check_graph_matches(graph: DependencyGraph, suite_names: tuple[str, ...], path: str) -> None:
    if graph.order != suite_names:
        raise SchemaError(f"{path}: graph tests do not match the suite's tests and order")


# -- commands --------------------------------------------------------------------


def cmd_extract(args: argparse.Namespace) -> int:
    config = _config(args)
    suite, manifest = load_inputs(config)
    graph = extract(config, suite, manifest)
    log.info("extracted %d candidate edges from %d tests", len(graph), len(suite))
    _emit(export_graph(graph, args.format), args.output)
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    config = _config(args)
    suite, _ = load_inputs(config)
    graph = _read_graph(args.graph)
    _check_graph_matches(graph, suite.names, args.graph)
    filtered, _, _ = apply_filters(config, suite, graph, _confirmer(config))
    if args.report:
        Path(args.report).write_text(
            json.dumps(filter_report(filtered), indent=2) + "\n", encoding="utf-8"
        )
    _emit(export_graph(filtered, args.format), args.output)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    config = _config(args)
    suite, manifest = load_inputs(config)
    graph = _read_graph(args.graph)
    _check_graph_matches(graph, suite.names, args.graph)
    state = run_full_validation(suite, manifest, graph)
    log.info("validation executed %d schedules", state.runs())
    if args.events:
        Path(args.events).write_text(events_to_jsonl(state.events), encoding="utf-8")
    _emit(export_graph(state.graph, args.format), args.output)
    return 0


def cmd_schedule(args: argparse.Namespace) -> int:
    config = _config(args)
    suite, manifest = load_inputs(config)
    graph = _read_graph(args.graph)
    _check_graph_matches(graph, suite.names, args.graph)
    schedules = derive_schedules(graph, suite, manifest)
    doc = {"schedules": schedules.to_list()}
    if schedules.schedules:
        doc["metrics"] = speedup_metrics(schedules).to_dict()
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    if args.run:
        run_parallel(schedules, suite, manifest, workers=args.workers)
        log.info("all %d schedules pass", len(schedules))
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = _config(args, out_dir=args.out)
    result = run_pipeline(config, _confirmer(config))
    write_artifacts(result, args.out)
    sys.stdout.write(format_table([result.summary()]))
    if result.violation is not None:
        raise result.violation
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    rows = []
    for raw in args.summaries:
        path = Path(raw)
        if path.is_dir():
            path = path / "summary.json"
        with open(path, encoding="utf-8") as fh:
            try:
                rows.append(json.load(fh))
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        sys.stdout.write(format_table(rows))
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    suite, manifest = random_suite(args.seed, GeneratorConfig(max_tests=args.max_tests))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "suite.txt").write_text(serialize_suite(suite), encoding="utf-8")
    (out / "manifest.json").write_text(json.dumps(manifest_to_dict(manifest), indent=2) + "\n", encoding="utf-8")
    log.info("wrote %d tests to %s", len(suite), out)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    lexicon = PosLexicon.load(args.lexicon)
    taxonomy = VerbTaxonomy.load(args.taxonomy)
    docs = [analyze_name(n, lexicon, taxonomy, args.dobj_mode).to_dict() for n in args.names]
    sys.stdout.write(json.dumps(docs, indent=2) + "\n")
    return 0


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webtestdeps",
        description="Detect dependencies between end-to-end web tests and derive parallel schedules.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for execution traces")
    sub = parser.add_subparsers(dest="command", required=True)

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--suite", required=True, help="test suite file (DSL, or .java)")
    inputs.add_argument("--manifest", required=True, help="application manifest (JSON)")

    extraction = argparse.ArgumentParser(add_help=False)
    extraction.add_argument(
        "--extract",
        choices=[e.value for e in Extraction],
        default=Extraction.STRING_ANALYSIS.value,
        help="candidate extraction strategy (default: %(default)s)",
    )
    extraction.add_argument(
        "--include-locators", action="store_true", help="also match submitted values against locators"
    )

    filtering = argparse.ArgumentParser(add_help=False)
    filtering.add_argument(
        "--filter",
        action="append",
        choices=[f.value for f in FilterName],
        help="filter to apply, in order; repeatable (at most one nlp-* filter)",
    )
    filtering.add_argument("--assume-yes", action="append", metavar="VALUE", help="confirm VALUE as dependency-free ('*' for all)")
    filtering.add_argument("--assume-no", action="append", metavar="VALUE", help="discard VALUE ('*' for all)")
    filtering.add_argument("--auto", action="store_true", help="confirm values present in every test")
    filtering.add_argument(
        "--dobj-mode",
        choices=[m.value for m in DobjMode],
        default=DobjMode.LAST_NOUN_OF_LEADING_COMPOUND.value,
    )
    filtering.add_argument("--taxonomy", help=f"verb taxonomy file (default: ${TAXONOMY_ENV} or bundled)")
    filtering.add_argument("--lexicon", help=f"POS lexicon file (default: ${LEXICON_ENV} or bundled)")

    def graph_out(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=["json", "dot"], default="json")
        p.add_argument("-o", "--output", help="write to a file instead of stdout")

    p = sub.add_parser("extract", parents=[inputs, extraction], help="build the candidate dependency graph")
    graph_out(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("filter", parents=[inputs, filtering], help="remove likely-false candidates")
    p.add_argument("graph", help="candidate graph (JSON)")
    p.add_argument("--report", help="write removed edges with reasons to this file")
    graph_out(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("validate", parents=[inputs], help="validate candidates by executing schedules")
    p.add_argument("graph", help="filtered graph (JSON)")
    p.add_argument("--events", help="write the validation event log (JSON lines)")
    graph_out(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("schedule", parents=[inputs], help="derive parallel schedules from a validated graph")
    p.add_argument("graph", help="validated graph (JSON)")
    p.add_argument("-o", "--output", help="write schedules and metrics to a file")
    p.add_argument("--run", action="store_true", help="execute the schedules and check they pass")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("pipeline", parents=[inputs, extraction, filtering], help="run every stage and write artifacts")
    p.add_argument("--out", required=True, help="artifact directory")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("report", help="tabulate summaries of one or more pipeline runs")
    p.add_argument("summaries", nargs="+", help="summary.json files or artifact directories")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("generate", help="write a seeded random suite and manifest")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-tests", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="show how test names are tagged and classified")
    p.add_argument("names", nargs="+")
    p.add_argument("--dobj-mode", choices=[m.value for m in DobjMode], default=DobjMode.LAST_NOUN_OF_LEADING_COMPOUND.value)
    p.add_argument("--taxonomy")
    p.add_argument("--lexicon")
    p.set_defaults(func=cmd_analyze)
    return parser


def _configure_logging(verbose: int) -> None:
    pkg = logging.getLogger("webtestdeps")
    for handler in [h for h in pkg.handlers if getattr(h, "_webtestdeps", False)]:
        pkg.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._webtestdeps = True  # type: ignore[attr-defined]
    pkg.addHandler(handler)
    pkg.setLevel(logging.WARNING - 10 * min(verbose, 2))
    pkg.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except SoundnessViolation as exc:
        print(f"soundness violation: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        where = f"{exc.filename}: " if exc.filename else ""
        print(f"error: {where}{exc.strerror or exc}", file=sys.stderr)
        return 1
    except WebTestDepsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
