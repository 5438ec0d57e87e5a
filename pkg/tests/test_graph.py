from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webtestdeps.errors import SchemaError, UnknownTestName
from webtestdeps.generate import random_suite
from webtestdeps.graph import (
    DependencyGraph,
    EdgeStatus,
    Origin,
    export_graph,
    extract_original_order,
    extract_sub_use,
    import_graph,
    submitted_values,
    used_values,
)
from webtestdeps.suite import TestCase, TestSuite, load_suite, parse_suite

from conftest import T, fixture_path, pairs


def chain(n: int) -> TestSuite:
    return TestSuite(tuple(TestCase(f"t{i}", ()) for i in range(1, n + 1)))


class TestOriginalOrder:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_edge_count(self, n):
        graph = extract_original_order(chain(n))
        assert len(graph) == n * (n - 1) // 2
        assert all(not e.labels and e.status is EdgeStatus.CANDIDATE for e in graph)

    def test_six_tests(self, claroline_suite):
        assert len(extract_original_order(claroline_suite)) == 15


class TestSubUse:
    def test_fig1_sets(self, claroline_manifest):
        suite = load_suite(fixture_path("fig1.java"))
        add, search = suite.tests
        assert submitted_values(add, claroline_manifest.catalog) == {
            "admin", "Name001", "Firstname001", "user001", "password001"
        }
        graph = extract_sub_use(suite, claroline_manifest.catalog)
        edge = graph.get("searchUserTest", "addUserTest")
        assert edge.labels == {"admin", "Name001", "Firstname001", "user001"}

    def test_fixture_edges(self, claroline_suite, claroline_manifest):
        graph = extract_sub_use(claroline_suite, claroline_manifest.catalog)
        assert graph.get(T[5], T[4]).labels == {"admin", "course001", "Course001"}
        assert (T[4], T[3]) not in graph  # loginUserTest submits nothing addCourseTest uses

    def test_no_input_submitting(self, claroline_manifest):
        s = parse_suite('TEST a\nassertText x "v"\nTEST b\nassertText x "v"\n')
        assert len(extract_sub_use(s, claroline_manifest.catalog)) == 0

    def test_no_shared_literal(self, claroline_manifest):
        s = parse_suite('TEST a\nsendKeys x "v"\nTEST b\nassertText x "w"\n')
        assert len(extract_sub_use(s, claroline_manifest.catalog)) == 0

    def test_case_sensitive_exact(self, claroline_manifest):
        s = parse_suite('TEST a\nsendKeys x "User"\nTEST b\nassertText x "user"\nassertText y "User1"\n')
        assert len(extract_sub_use(s, claroline_manifest.catalog)) == 0

    def test_locators_only_on_request(self, claroline_manifest):
        s = parse_suite('TEST a\nsendKeys x "id=box"\nTEST b\nclick id=box\n')
        assert len(extract_sub_use(s, claroline_manifest.catalog)) == 0
        graph = extract_sub_use(s, claroline_manifest.catalog, include_locators=True)
        assert graph.get("b", "a").labels == {"id=box"}
        assert used_values(s.tests[1], include_locators=True) == {"id=box"}

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 100_000))
    def test_subset_of_original_order(self, seed):
        suite, manifest = random_suite(seed)
        sub = extract_sub_use(suite, manifest.catalog).pairs()
        assert sub <= extract_original_order(suite).pairs()

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 100_000))
    def test_literal_praw_completeness(self, seed):
        # the generator carries every entity key in a literal, so each
        # writer -> reader pair of the same key must be a candidate
        suite, manifest = random_suite(seed)
        graph = extract_sub_use(suite, manifest.catalog)
        writes = {}
        for test in suite:
            for stmt in test.statements:
                for effect in manifest.effects_for(stmt):
                    key = effect.resolve(stmt.args)
                    if effect.kind.value == "WRITE":
                        writes.setdefault(key, []).append(test.name)
                    elif effect.kind.value == "READ" and not key.startswith("user:"):
                        for writer in writes.get(key, []):
                            if writer != test.name:
                                assert (test.name, writer) in graph


class TestGraph:
    def test_edges_point_backwards(self):
        g = DependencyGraph(["a", "b"])
        with pytest.raises(ValueError):
            g.add_edge("a", "b")
        with pytest.raises(ValueError):
            g.add_edge("a", "a")
        with pytest.raises(UnknownTestName):
            g.add_edge("c", "a")

    def test_labels_merge_per_pair(self):
        g = DependencyGraph(["a", "b"])
        g.add_edge("b", "a", {"x"})
        g.add_edge("b", "a", {"y"})
        assert len(g) == 1 and g.get("b", "a").labels == {"x", "y"}

    def test_status_transitions(self):
        g = DependencyGraph(["a", "b"])
        e = g.add_edge("b", "a")
        e.set_status(EdgeStatus.MANIFEST)
        with pytest.raises(ValueError):
            e.set_status(EdgeStatus.REMOVED)

    def test_closure_and_skip(self):
        g = DependencyGraph(["a", "b", "c"])
        g.add_edge("b", "a")
        g.add_edge("c", "b")
        g.add_edge("c", "a").set_status(EdgeStatus.REMOVED)
        assert g.closure("c") == {"a", "b"}
        assert g.closure("c", skip=("c", "b")) == set()

    def test_edge_ordering(self, claroline_suite):
        g = extract_original_order(claroline_suite)
        keys = [(g.position(e.dependent), g.position(e.prerequisite)) for e in g]
        assert keys == sorted(keys)


def fig2_graph() -> DependencyGraph:
    g = DependencyGraph(T[i] for i in range(1, 7))
    for dep, pre in sorted(pairs((2, 1), (3, 1), (5, 4), (6, 1), (6, 4))):
        g.add_edge(dep, pre, status=EdgeStatus.MANIFEST)
    return g


class TestExport:
    def test_fig2_dot(self):
        dot = export_graph(fig2_graph(), "dot")
        assert dot.count("style=solid") == 5
        assert "dashed" not in dot
        assert '"searchUserTest" -> "addUserTest" [style=solid];' in dot

    def test_empty_graph(self):
        g = DependencyGraph([])
        assert export_graph(g, "dot") == "digraph tdg {\n  rankdir=BT;\n}\n"
        assert import_graph(export_graph(g, "json")) == g

    def test_candidate_dashed_with_labels(self):
        g = DependencyGraph(["a", "b"])
        g.add_edge("b", "a", {"y", "x"})
        assert '"b" -> "a" [style=dashed, label="x,y"];' in export_graph(g, "dot")

    def test_removed_not_in_dot_but_in_json(self):
        g = DependencyGraph(["a", "b"])
        g.add_edge("b", "a").set_status(EdgeStatus.REMOVED, "RAR")
        assert "->" not in export_graph(g, "dot")
        again = import_graph(export_graph(g, "json"))
        assert again.get("b", "a").status is EdgeStatus.REMOVED
        assert again.get("b", "a").reason == "RAR"

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 100_000), st.data())
    def test_json_roundtrip(self, seed, data):
        suite, manifest = random_suite(seed)
        g = extract_sub_use(suite, manifest.catalog)
        for e in g:
            choice = data.draw(st.sampled_from(list(EdgeStatus)))
            if choice is not EdgeStatus.CANDIDATE:
                e.set_status(choice, data.draw(st.sampled_from([None, "why"])))
            e.origin = data.draw(st.sampled_from(list(Origin)))
        assert import_graph(export_graph(g, "json")) == g

    def test_dot_is_stable(self, claroline_suite):
        a = extract_original_order(claroline_suite)
        assert export_graph(a, "dot") == export_graph(a.copy(), "dot")

    @pytest.mark.parametrize(
        "text",
        ["[]", "{", '{"format_version": 2, "tests": [], "edges": []}',
         '{"format_version": 1, "tests": ["a", "b"], "edges": [{"dependent": "a", "prerequisite": "b"}]}',
         '{"format_version": 1, "tests": ["a"], "edges": [{"dependent": "a"}]}'],
    )
    def test_import_errors(self, text):
        with pytest.raises(SchemaError):
            import_graph(text)
