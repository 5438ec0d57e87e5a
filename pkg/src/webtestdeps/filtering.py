"""Static removal of likely-false candidate edges.

Two families of filters: dependency-free string values (strings such as a
default ``admin`` account shared by many tests) and read/write classification
of test names.  Neither consults execution results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import UnknownValue
from .graph import DependencyGraph, EdgeStatus
from .nlp import (
    DEFAULT_DOBJ_MODE,
    DobjMode,
    NameAnalysis,
    PosLexicon,
    RWClass,
    VerbTaxonomy,
    analyze_name,
)
from .suite import TestSuite


class NlpConfig(str, enum.Enum):
    VERB = "VERB"
    DOBJ = "DOBJ"
    NOUN = "NOUN"


RAR = "RAR"
WAR = "WAR"
DOBJ_DIFF = "DOBJ_DIFF"
NOUN_DISJOINT = "NOUN_DISJOINT"
DEP_FREE = "DEP_FREE"


@dataclass(frozen=True)
class ValueFrequency:
    value: str
    test_count: int
    edge_refs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class StringFrequencyReport:
    entries: tuple[ValueFrequency, ...]
    n_tests: int

    def __contains__(self, value: object) -> bool:
        return any(e.value == value for e in self.entries)

    def __getitem__(self, value: str) -> ValueFrequency:
        for e in self.entries:
            if e.value == value:
                return e
        raise KeyError(value)

    @property
    def values(self) -> list[str]:
        return [e.value for e in self.entries]

    def universal(self) -> list[str]:
        """Values found in every test of the suite."""
        return [e.value for e in self.entries if e.test_count == self.n_tests]

    def frequent(self) -> list[ValueFrequency]:
        """Entries worth asking about: present in at least half of the tests."""
        threshold = math.ceil(self.n_tests / 2)
        return [e for e in self.entries if e.test_count >= threshold]

    def to_list(self) -> list[dict]:
        return [
            {
                "value": e.value,
                "test_count": e.test_count,
                "edges": [list(p) for p in e.edge_refs],
            }
            for e in self.entries
        ]


def rank_string_values(graph: DependencyGraph, suite: TestSuite) -> StringFrequencyReport:
    refs: dict[str, list[tuple[str, str]]] = {}
    for edge in graph.edges():
        for value in edge.labels:
            refs.setdefault(value, []).append(edge.pair)
    literals = [t.literals() for t in suite]
    entries = [
        ValueFrequency(value, sum(value in lits for lits in literals), tuple(pairs))
        for value, pairs in refs.items()
    ]
    entries.sort(key=lambda e: (-e.test_count, e.value))
    return StringFrequencyReport(tuple(entries), len(suite))


def filter_dependency_free(
    graph: DependencyGraph,
    report: StringFrequencyReport,
    confirmed: set[str] | frozenset[str] = frozenset(),
    auto: bool = False,
) -> DependencyGraph:
    """Strip dependency-free values from edge labels.

    An edge whose labels all disappear is REMOVED with reason
    ``DEP_FREE:<value>``, naming the value whose removal emptied it.
    """
    unknown = sorted(v for v in confirmed if v not in report)
    if unknown:
        raise UnknownValue(f"values not in the frequency report: {', '.join(unknown)}")
    values = set(confirmed)
    if auto:
        values.update(report.universal())
    out = graph.copy()
    for value in sorted(values):
        for edge in out.edges(EdgeStatus.CANDIDATE):
            if value in edge.labels:
                edge.labels.discard(value)
                if not edge.labels:
                    edge.set_status(EdgeStatus.REMOVED, f"{DEP_FREE}:{value}")
    return out


def _nlp_reason(
    dependent: NameAnalysis, prerequisite: NameAnalysis, config: NlpConfig
) -> str | None:
    """Removal reason for ``dependent -> prerequisite`` or None to keep it."""
    cy, cx = dependent.rw_class, prerequisite.rw_class
    if RWClass.UNCLASSIFIED in (cy, cx):
        return None
    if cx is RWClass.READ:
        return RAR if cy is RWClass.READ else WAR
    # read-after-write or write-after-write
    if config is NlpConfig.VERB:
        return None
    if dependent.direct_object is None or prerequisite.direct_object is None:
        return None
    if config is NlpConfig.DOBJ:
        if dependent.direct_object.lower() != prerequisite.direct_object.lower():
            return DOBJ_DIFF
        return None
    if not dependent.noun_keys() & prerequisite.noun_keys():
        return NOUN_DISJOINT
    return None


def filter_nlp(
    graph: DependencyGraph,
    suite: TestSuite,
    config: NlpConfig | str,
    lexicon: PosLexicon,
    taxonomy: VerbTaxonomy,
    dobj_mode: DobjMode | str = DEFAULT_DOBJ_MODE,
) -> DependencyGraph:
    config = NlpConfig(config)
    analyses = {t.name: analyze_name(t.name, lexicon, taxonomy, dobj_mode) for t in suite}
    out = graph.copy()
    for edge in out.edges(EdgeStatus.CANDIDATE):
        reason = _nlp_reason(analyses[edge.dependent], analyses[edge.prerequisite], config)
        if reason is not None:
            edge.set_status(EdgeStatus.REMOVED, reason)
    return out


def filter_report(graph: DependencyGraph) -> list[dict]:
    """Edges removed by filtering, with their reason codes."""
    return [
        {"dependent": e.dependent, "prerequisite": e.prerequisite, "reason": e.reason}
        for e in graph.edges(EdgeStatus.REMOVED)
    ]
