"""Detection of test dependencies in end-to-end web test suites.

Candidate dependencies come from the original test order or from sub-use
string analysis, are pruned by static filters, validated against a
deterministic application simulator and finally turned into parallel
schedules.
"""

from .errors import (
    BaselineFailure,
    GraphNotValidated,
    InputError,
    IterationBudgetExceeded,
    SoundnessViolation,
    WebTestDepsError,
)
from .filtering import NlpConfig, filter_dependency_free, filter_nlp, rank_string_values
from .graph import (
    DependencyGraph,
    Edge,
    EdgeStatus,
    Origin,
    export_graph,
    extract_original_order,
    extract_sub_use,
    import_graph,
)
from .nlp import DobjMode, PosLexicon, RWClass, VerbTaxonomy, analyze_name, classify_verb
from .pipeline import Extraction, FilterName, RunConfig, run_pipeline, write_artifacts
from .scheduler import derive_schedules, run_parallel, speedup_metrics
from .simulator import Outcome, OutcomeVector, Schedule, Simulator, execute_schedule
from .suite import AppManifest, TestCase, TestSuite, load_manifest, load_suite, parse_manifest, parse_suite
from .validator import run_full_validation

__version__ = "0.1.0"

__all__ = [
    "AppManifest",
    "BaselineFailure",
    "DependencyGraph",
    "DobjMode",
    "Edge",
    "EdgeStatus",
    "Extraction",
    "FilterName",
    "GraphNotValidated",
    "InputError",
    "IterationBudgetExceeded",
    "NlpConfig",
    "Origin",
    "Outcome",
    "OutcomeVector",
    "PosLexicon",
    "RWClass",
    "RunConfig",
    "Schedule",
    "Simulator",
    "SoundnessViolation",
    "TestCase",
    "TestSuite",
    "VerbTaxonomy",
    "WebTestDepsError",
    "analyze_name",
    "classify_verb",
    "derive_schedules",
    "execute_schedule",
    "export_graph",
    "extract_original_order",
    "extract_sub_use",
    "filter_dependency_free",
    "filter_nlp",
    "import_graph",
    "load_manifest",
    "load_suite",
    "parse_manifest",
    "parse_suite",
    "rank_string_values",
    "run_full_validation",
    "run_parallel",
    "run_pipeline",
    "speedup_metrics",
    "write_artifacts",
]
