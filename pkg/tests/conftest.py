from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from webtestdeps.suite import AppManifest, TestSuite, load_manifest, load_suite

FIXTURES = Path(str(resources.files("webtestdeps").joinpath("data").joinpath("fixtures")))

# Claroline-like fixture names by original position
T = {
    1: "addUserTest",
    2: "searchUserTest",
    3: "loginUserTest",
    4: "addCourseTest",
    5: "searchCourseTest",
    6: "enrolUserTest",
}


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def pairs(*spec: tuple[int, int]) -> set[tuple[str, str]]:
    """Map (dependent index, prerequisite index) tuples to Claroline test names."""
    return {(T[a], T[b]) for a, b in spec}


@pytest.fixture(scope="session")
def claroline_manifest() -> AppManifest:
    return load_manifest(FIXTURES / "claroline.manifest.json")


@pytest.fixture(scope="session")
def claroline_suite(claroline_manifest) -> TestSuite:
    return load_suite(FIXTURES / "claroline.suite", claroline_manifest.catalog)


@pytest.fixture(scope="session")
def items_manifest() -> AppManifest:
    return load_manifest(FIXTURES / "items.manifest.json")
