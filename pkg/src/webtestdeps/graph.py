"""Test dependency graph (TDG) plus candidate extraction and serialization.

Edges point from a dependent test to its prerequisite and always go backwards
in the original order, so the graph is acyclic by construction.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import SchemaError, UnknownTestName
from .suite import ActionCatalog, TestSuite

FORMAT_VERSION = 1


class EdgeStatus(str, enum.Enum):
    CANDIDATE = "CANDIDATE"
    MANIFEST = "MANIFEST"
    REMOVED = "REMOVED"


class Origin(str, enum.Enum):
    EXTRACTED = "EXTRACTED"
    RECOVERED = "RECOVERED"
    RECOVERED_DISCONNECTED = "RECOVERED_DISCONNECTED"


ACTIVE = frozenset({EdgeStatus.CANDIDATE, EdgeStatus.MANIFEST})


@dataclass
class Edge:
    dependent: str
    prerequisite: str
    labels: set[str] = field(default_factory=set)
    status: EdgeStatus = EdgeStatus.CANDIDATE
    origin: Origin = Origin.EXTRACTED
    # why the edge reached its current status (filter code, "transitive", ...)
    reason: str | None = None

    @property
    def pair(self) -> tuple[str, str]:
        return (self.dependent, self.prerequisite)

    def set_status(self, status: EdgeStatus, reason: str | None = None) -> None:
        if self.status is not EdgeStatus.CANDIDATE or status is EdgeStatus.CANDIDATE:
            raise ValueError(
                f"illegal status change {self.status.value} -> {status.value} "
                f"for {self.dependent} -> {self.prerequisite}"
            )
        self.status = status
        self.reason = reason

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "prerequisite": self.prerequisite,
            "labels": sorted(self.labels),
            "status": self.status.value,
            "origin": self.origin.value,
            "reason": self.reason,
        }

    def __str__(self) -> str:
        return f"{self.dependent} -> {self.prerequisite}"


class DependencyGraph:
    def __init__(self, order: Iterable[str]):
        self.order: tuple[str, ...] = tuple(order)
        self._pos = {name: i for i, name in enumerate(self.order, start=1)}
        if len(self._pos) != len(self.order):
            raise ValueError("duplicate node in graph order")
        self._edges: dict[tuple[str, str], Edge] = {}

    @classmethod
    def for_suite(cls, suite: TestSuite) -> "DependencyGraph":
        return cls(suite.names)

    # -- queries ---------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.order

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise UnknownTestName(f"unknown test {name!r}") from None

    def _sort_key(self, edge: Edge) -> tuple[int, int]:
        return (self._pos[edge.dependent], self._pos[edge.prerequisite])

    def edges(self, *statuses: EdgeStatus) -> list[Edge]:
        """Edges (optionally filtered by status) sorted by dependent, then prerequisite order."""
        selected = [
            e for e in self._edges.values() if not statuses or e.status in statuses
        ]
        return sorted(selected, key=self._sort_key)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges())

    def __len__(self) -> int:
        return len(self._edges)

    def get(self, dependent: str, prerequisite: str) -> Edge | None:
        return self._edges.get((dependent, prerequisite))

    def __contains__(self, pair: object) -> bool:
        return pair in self._edges

    def pairs(self, *statuses: EdgeStatus) -> set[tuple[str, str]]:
        return {e.pair for e in self.edges(*statuses)}

    def prerequisites(self, name: str, statuses: Iterable[EdgeStatus] = ACTIVE) -> list[str]:
        statuses = frozenset(statuses)
        found = [
            e.prerequisite
            for e in self._edges.values()
            if e.dependent == name and e.status in statuses
        ]
        return sorted(found, key=self._pos.__getitem__)

    def dependents(self, name: str, statuses: Iterable[EdgeStatus] = ACTIVE) -> list[str]:
        statuses = frozenset(statuses)
        found = [
            e.dependent
            for e in self._edges.values()
            if e.prerequisite == name and e.status in statuses
        ]
        return sorted(found, key=self._pos.__getitem__)

    def closure(
        self,
        name: str,
        statuses: Iterable[EdgeStatus] = ACTIVE,
        skip: tuple[str, str] | None = None,
    ) -> set[str]:
        """Transitive prerequisites of ``name``, optionally ignoring one edge."""
        statuses = frozenset(statuses)
        adjacency: dict[str, list[str]] = {}
        for e in self._edges.values():
            if e.status in statuses and e.pair != skip:
                adjacency.setdefault(e.dependent, []).append(e.prerequisite)
        seen: set[str] = set()
        stack = [name]
        while stack:
            for pre in adjacency.get(stack.pop(), ()):
                if pre not in seen:
                    seen.add(pre)
                    stack.append(pre)
        return seen

    def in_original_order(self, names: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(names, key=self.position))

    # -- mutation --------------------------------------------------------

    def add_edge(
        self,
        dependent: str,
        prerequisite: str,
        labels: Iterable[str] = (),
        status: EdgeStatus = EdgeStatus.CANDIDATE,
        origin: Origin = Origin.EXTRACTED,
        reason: str | None = None,
    ) -> Edge:
        """Add an edge, or merge ``labels`` into the existing one for this pair."""
        if self.position(dependent) <= self.position(prerequisite):
            raise ValueError(
                f"edge {dependent} -> {prerequisite} does not point backwards "
                "in the original order"
            )
        edge = self._edges.get((dependent, prerequisite))
        if edge is None:
            edge = Edge(dependent, prerequisite, set(labels), status, origin, reason)
            self._edges[edge.pair] = edge
        else:
            edge.labels.update(labels)
        return edge

    def copy(self) -> "DependencyGraph":
        clone = DependencyGraph(self.order)
        for e in self._edges.values():
            clone._edges[e.pair] = Edge(
                e.dependent, e.prerequisite, set(e.labels), e.status, e.origin, e.reason
            )
        return clone

    def active_copy(self) -> "DependencyGraph":
        """Copy keeping only the edges that are not REMOVED."""
        clone = self.copy()
        clone._edges = {p: e for p, e in clone._edges.items() if e.status in ACTIVE}
        return clone

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyGraph):
            return NotImplemented
        return self.order == other.order and self._edges == other._edges

    def __repr__(self) -> str:
        return f"DependencyGraph({len(self.order)} tests, {len(self._edges)} edges)"


# --------------------------------------------------------------------------
# Extraction


def extract_original_order(suite: TestSuite) -> DependencyGraph:
    """Connect every test to every test that runs before it."""
    graph = DependencyGraph.for_suite(suite)
    names = suite.names
    for j, dependent in enumerate(names):
        for prerequisite in names[:j]:
            graph.add_edge(dependent, prerequisite)
    return graph


def submitted_values(test, catalog: ActionCatalog) -> set[str]:
    return {
        arg
        for stmt in test.statements
        if stmt.action in catalog.input_submitting
        for arg in stmt.args
    }


def used_values(test, include_locators: bool = False) -> set[str]:
    used = test.literals()
    if include_locators:
        used.update(stmt.locator for stmt in test.statements)
    return used


def extract_sub_use(
    suite: TestSuite, catalog: ActionCatalog, include_locators: bool = False
) -> DependencyGraph:
    """Sub-use string analysis.

    For each test ``t`` the values it submits through input-submitting actions
    are looked up (exact, case-sensitive) among the string literals of every
    later test ``tf``; a non-empty intersection yields ``tf -> t`` labelled with
    the shared values.
    """
    graph = DependencyGraph.for_suite(suite)
    used = {t.name: used_values(t, include_locators) for t in suite}
    tests = suite.tests
    for i, test in enumerate(tests):
        submitted = submitted_values(test, catalog)
        if not submitted:
            continue
        for follower in tests[i + 1 :]:
            shared = used[follower.name] & submitted
            if shared:
                graph.add_edge(follower.name, test.name, shared)
    return graph


# --------------------------------------------------------------------------
# Serialization


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: DependencyGraph) -> str:
    lines = ["digraph tdg {", "  rankdir=BT;"]
    for name in graph.order:
        lines.append(f"  {_dot_id(name)};")
    for e in graph.edges(EdgeStatus.CANDIDATE, EdgeStatus.MANIFEST):
        attrs = ["style=" + ("solid" if e.status is EdgeStatus.MANIFEST else "dashed")]
        if e.labels:
            attrs.append("label=" + _dot_id(",".join(sorted(e.labels))))
        lines.append(f"  {_dot_id(e.dependent)} -> {_dot_id(e.prerequisite)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dict(graph: DependencyGraph) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "tests": list(graph.order),
        "edges": [e.to_dict() for e in graph.edges()],
    }


def to_json(graph: DependencyGraph) -> str:
    return json.dumps(to_dict(graph), indent=2) + "\n"


def export_graph(graph: DependencyGraph, format: str = "json") -> str:
    if format == "dot":
        return to_dot(graph)
    if format == "json":
        return to_json(graph)
    raise ValueError(f"unknown graph format {format!r}")


def from_dict(doc: dict) -> DependencyGraph:
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise SchemaError(f"unsupported graph format_version {doc.get('format_version')!r}")
        graph = DependencyGraph(doc["tests"])
        for raw in doc["edges"]:
            graph.add_edge(
                raw["dependent"],
                raw["prerequisite"],
                raw.get("labels", ()),
                EdgeStatus(raw.get("status", "CANDIDATE")),
                Origin(raw.get("origin", "EXTRACTED")),
                raw.get("reason"),
            )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SchemaError(f"malformed graph document: {exc}") from None
    return graph


def import_graph(text: str) -> DependencyGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"graph is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be a JSON object")
    return from_dict(doc)
