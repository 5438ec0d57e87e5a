from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from webtestdeps.generate import GeneratorConfig, random_suite
from webtestdeps.simulator import baseline_outcomes
from webtestdeps.suite import parse_suite, serialize_suite


class TestGenerator:
    def test_seeded(self):
        assert random_suite(7) == random_suite(7)
        assert random_suite(7) != random_suite(8)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10**9))
    def test_shape(self, seed):
        suite, manifest = random_suite(seed)
        assert 2 <= len(suite) <= 10
        assert baseline_outcomes(suite, manifest).failed() == []
        assert parse_suite(serialize_suite(suite), manifest.catalog) == suite

    def test_size_bound(self):
        for seed in range(50):
            suite, _ = random_suite(seed, GeneratorConfig(max_tests=4))
            assert len(suite) <= 4

    def test_effect_kinds_all_occur(self):
        kinds = set()
        for seed in range(30):
            suite, manifest = random_suite(seed)
            for test in suite:
                for stmt in test.statements:
                    kinds.update(e.kind.value for e in manifest.effects_for(stmt))
        assert kinds == {"WRITE", "READ", "DELETE"}
