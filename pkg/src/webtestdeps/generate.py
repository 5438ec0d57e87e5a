"""Seeded random suites whose original order passes, with matching manifests.

Tests are built in order against a model of the store so that every READ or
DELETE targets a key that exists at that point of the original run.  Test
names combine a verb and the entities touched, and occasionally use a
misleading or unclassifiable verb so that name-based filters can be wrong.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .suite import (
    ActionCatalog,
    AppManifest,
    Effect,
    EffectKind,
    EffectRule,
    Statement,
    TestCase,
    TestSuite,
)

ENTITIES = ("Item", "Course", "User", "Order", "Note", "Event", "Page")
VERBS = {
    EffectKind.WRITE: ("add", "create", "update", "edit", "insert"),
    EffectKind.READ: ("search", "view", "check", "find", "read"),
    EffectKind.DELETE: ("delete", "remove"),
}
OFF_VERBS = ("run", "use", "open", "do")
ADMIN = "admin"


def generator_manifest(costs: dict[str, float] | None = None) -> AppManifest:
    catalog = ActionCatalog({"sendKeys": 1, "assertText": 1, "click": 0})
    rules = (
        EffectRule("sendKeys", "id=create_*", (Effect(EffectKind.WRITE, "{arg0}"),)),
        EffectRule("sendKeys", "id=search_*", (Effect(EffectKind.READ, "{arg0}"),)),
        EffectRule("assertText", "id=view_*", (Effect(EffectKind.READ, "{arg0}"),)),
        EffectRule("sendKeys", "id=delete_*", (Effect(EffectKind.DELETE, "{arg0}"),)),
        EffectRule("sendKeys", "id=login", (Effect(EffectKind.READ, "user:{arg0}"),)),
    )
    return AppManifest(
        catalog=catalog,
        rules=rules,
        initial_state={f"user:{ADMIN}": ""},
        costs=dict(costs or {}),
        default_cost=1.0,
    )


@dataclass(frozen=True)
class GeneratorConfig:
    max_tests: int = 10
    min_tests: int = 2
    max_ops: int = 3
    admin_probability: float = 0.5
    misleading_probability: float = 0.15


def _statement(kind: EffectKind, entity: str, value: str, rng: random.Random) -> Statement:
    slug = entity.lower()
    if kind is EffectKind.WRITE:
        return Statement("sendKeys", f"id=create_{slug}", (value,))
    if kind is EffectKind.DELETE:
        return Statement("sendKeys", f"id=delete_{slug}", (value,))
    if rng.random() < 0.5:
        return Statement("sendKeys", f"id=search_{slug}", (value,))
    return Statement("assertText", f"id=view_{slug}", (value,))


def random_suite(
    seed: int, config: GeneratorConfig = GeneratorConfig()
) -> tuple[TestSuite, AppManifest]:
    rng = random.Random(seed)
    n = rng.randint(config.min_tests, config.max_tests)
    entities = rng.sample(ENTITIES, rng.randint(1, 3))
    present: dict[str, str] = {}  # value -> entity, as of the current point
    counters = {e: 0 for e in entities}
    use_admin = rng.random() < config.admin_probability
    names: set[str] = set()
    tests: list[TestCase] = []

    for _ in range(n):
        statements: list[Statement] = []
        if use_admin:
            statements.append(Statement("sendKeys", "id=login", (ADMIN,)))
        ops: list[tuple[EffectKind, str]] = []
        for _ in range(rng.randint(1, config.max_ops)):
            kinds = [EffectKind.WRITE]
            if present:
                kinds += [EffectKind.READ, EffectKind.READ, EffectKind.DELETE]
            kind = rng.choice(kinds)
            if kind is EffectKind.WRITE:
                entity = rng.choice(entities)
                if present and rng.random() < 0.2:
                    value = rng.choice(sorted(present))
                    entity = present[value]
                else:
                    counters[entity] += 1
                    value = f"{entity.lower()}{counters[entity]:03d}"
                present[value] = entity
            else:
                value = rng.choice(sorted(present))
                entity = present[value]
                if kind is EffectKind.DELETE:
                    del present[value]
            statements.append(_statement(kind, entity, value, rng))
            if rng.random() < 0.3:
                statements.append(Statement("click", "id=menu", ()))
            ops.append((kind, entity))
        tests.append(TestCase(_name(ops, names, rng, config), tuple(statements)))

    costs = {t.name: float(rng.randint(1, 5)) for t in tests}
    return TestSuite(tuple(tests)), generator_manifest(costs)


def _name(
    ops: list[tuple[EffectKind, str]],
    taken: set[str],
    rng: random.Random,
    config: GeneratorConfig,
) -> str:
    kind, entity = ops[0]
    if rng.random() < config.misleading_probability:
        verb = rng.choice(OFF_VERBS + VERBS[EffectKind.READ] + VERBS[EffectKind.WRITE])
    else:
        verb = rng.choice(VERBS[kind])
    nouns = [entity]
    extra = [e for _, e in ops[1:] if e != entity]
    if extra and rng.random() < 0.5:
        nouns.append(extra[0])
    stem = verb + "".join(nouns)
    name, k = f"{stem}Test", 2
    while name in taken:
        name, k = f"{stem}{k}Test", k + 1
    taken.add(name)
    return name
