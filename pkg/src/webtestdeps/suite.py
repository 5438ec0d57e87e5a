"""Test-suite data model plus the suite DSL and application manifest parsers.

Suite files use a line DSL::

    # comment
    TEST addUserTest
    sendKeys id=username "user001"
    click "linkText=Create user"

One statement per line: an action name, a locator (bare, or double-quoted when
it contains blanks) and zero or more double-quoted string arguments.  Inside
quotes ``\\"`` and ``\\\\`` are the only escapes.

Manifests are JSON documents describing the action catalog, per-statement
effects on the persistent store and the initial store content.
"""

from __future__ import annotations

import enum
import json
import os
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .errors import (
    DuplicateTestName,
    PlaceholderIndexOutOfRange,
    SchemaError,
    SuiteSyntaxError,
    UnknownAction,
    UnknownTestName,
)

IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_TOKEN = re.compile(r'"((?:[^"\\]|\\.)*)"|([^\s"]+)')
_PLACEHOLDER = re.compile(r"\{arg(\d+)\}")

DEFAULT_INPUT_SUBMITTING = frozenset({"sendKeys"})
NO_LOCATOR = "-"


@dataclass(frozen=True)
class Statement:
    action: str
    locator: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class TestCase:
    name: str
    statements: tuple[Statement, ...] = ()

    __test__ = False  # keep pytest from collecting this class

    def __post_init__(self) -> None:
        if not IDENTIFIER.match(self.name):
            raise SuiteSyntaxError(f"invalid test name {self.name!r}")

    def literals(self) -> set[str]:
        """Every string argument appearing in any statement."""
        return {arg for stmt in self.statements for arg in stmt.args}


@dataclass(frozen=True)
class TestSuite:
    """Ordered test cases; position ``i`` (1-based) is the original order."""

    tests: tuple[TestCase, ...] = ()
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    __test__ = False

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for position, test in enumerate(self.tests, start=1):
            if test.name in index:
                raise DuplicateTestName(f"duplicate test name {test.name!r}")
            index[test.name] = position
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.tests)

    def __iter__(self) -> Iterator[TestCase]:
        return iter(self.tests)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tests)

    def order(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownTestName(f"unknown test {name!r}") from None

    def get(self, name: str) -> TestCase:
        return self.tests[self.order(name) - 1]

    def preceding(self, name: str) -> tuple[str, ...]:
        """Names of the tests that run before ``name`` in the original order."""
        return self.names[: self.order(name) - 1]


@dataclass(frozen=True)
class ActionCatalog:
    """Known actions with their argument arity, and the input-submitting subset."""

    arity: Mapping[str, int]
    input_submitting: frozenset[str] = DEFAULT_INPUT_SUBMITTING

    def __post_init__(self) -> None:
        unknown = self.input_submitting - set(self.arity)
        if unknown:
            raise SchemaError(
                "input_submitting actions not declared in actions: "
                + ", ".join(sorted(unknown))
            )

    @property
    def all_actions(self) -> frozenset[str]:
        return frozenset(self.arity)


class EffectKind(str, enum.Enum):
    WRITE = "WRITE"
    READ = "READ"
    DELETE = "DELETE"


@dataclass(frozen=True)
class Effect:
    kind: EffectKind
    key_template: str

    def placeholders(self) -> list[int]:
        return [int(m) for m in _PLACEHOLDER.findall(self.key_template)]

    def resolve(self, args: Sequence[str]) -> str:
        return _PLACEHOLDER.sub(lambda m: args[int(m.group(1))], self.key_template)


@dataclass(frozen=True)
class EffectRule:
    action: str
    locator: str
    effects: tuple[Effect, ...]

    def matches(self, action: str, locator: str) -> bool:
        if action != self.action:
            return False
        if "*" not in self.locator:
            return locator == self.locator
        prefix, suffix = self.locator.split("*")
        return (
            len(locator) >= len(prefix) + len(suffix)
            and locator.startswith(prefix)
            and locator.endswith(suffix)
        )


@dataclass(frozen=True)
class AppManifest:
    catalog: ActionCatalog
    rules: tuple[EffectRule, ...] = ()
    initial_state: Mapping[str, str] = field(default_factory=dict)
    costs: Mapping[str, float] = field(default_factory=dict)
    default_cost: float = 1.0

    def effects_for(self, statement: Statement) -> tuple[Effect, ...]:
        for rule in self.rules:
            if rule.matches(statement.action, statement.locator):
                return rule.effects
        return ()

    def cost(self, test: str) -> float:
        return self.costs.get(test, self.default_cost)


# --------------------------------------------------------------------------
# Suite DSL


def _tokenize(line: str, lineno: int, path: str | None) -> list[tuple[str, bool]]:
    """Split a line into ``(text, quoted)`` tokens; stops at a ``#`` comment."""
    tokens: list[tuple[str, bool]] = []
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        if line[pos] == "#":
            break
        if tokens and not line[pos - 1].isspace():
            raise SuiteSyntaxError("tokens must be separated by blanks", lineno, path)
        m = _TOKEN.match(line, pos)
        if m is None:
            raise SuiteSyntaxError("unterminated string literal", lineno, path)
        if m.group(1) is not None:
            tokens.append((_unescape(m.group(1)), True))
        else:
            tokens.append((m.group(2), False))
        pos = m.end()
    return tokens


def _unescape(text: str) -> str:
    return re.sub(r'\\(["\\])', r"\1", text)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def parse_suite(
    source: str,
    catalog: ActionCatalog | None = None,
    path: str | None = None,
) -> TestSuite:
    """Parse the line DSL into a :class:`TestSuite`, keeping file order."""
    tests: list[TestCase] = []
    seen: set[str] = set()
    name: str | None = None
    statements: list[Statement] = []

    def flush() -> None:
        if name is not None:
            tests.append(TestCase(name, tuple(statements)))

    for lineno, raw in enumerate(source.splitlines(), start=1):
        tokens = _tokenize(raw, lineno, path)
        if not tokens:
            continue
        head, head_quoted = tokens[0]
        if head == "TEST" and not head_quoted:
            if len(tokens) != 2 or tokens[1][1] or not IDENTIFIER.match(tokens[1][0]):
                raise SuiteSyntaxError("expected 'TEST <identifier>'", lineno, path)
            flush()
            name = tokens[1][0]
            if name in seen:
                raise DuplicateTestName(f"duplicate test name {name!r}", lineno, path)
            seen.add(name)
            statements = []
            continue
        if name is None:
            raise SuiteSyntaxError("statement outside of a TEST block", lineno, path)
        if head_quoted or not IDENTIFIER.match(head):
            raise SuiteSyntaxError(f"invalid action {head!r}", lineno, path)
        if len(tokens) < 2:
            raise SuiteSyntaxError(f"action {head!r} needs a locator", lineno, path)
        args = []
        for text, quoted in tokens[2:]:
            if not quoted:
                raise SuiteSyntaxError(
                    f"argument {text!r} must be a double-quoted string", lineno, path
                )
            args.append(text)
        if catalog is not None:
            if head not in catalog.arity:
                raise UnknownAction(f"unknown action {head!r}", lineno, path)
            if len(args) != catalog.arity[head]:
                raise SuiteSyntaxError(
                    f"action {head!r} takes {catalog.arity[head]} argument(s), "
                    f"got {len(args)}",
                    lineno,
                    path,
                )
        statements.append(Statement(head, tokens[1][0], tuple(args)))
    flush()
    return TestSuite(tuple(tests))


def serialize_suite(suite: TestSuite) -> str:
    lines: list[str] = []
    for test in suite:
        lines.append(f"TEST {test.name}")
        for stmt in test.statements:
            locator = stmt.locator
            if not locator or _TOKEN.fullmatch(locator) is None or locator[0] in '#"':
                locator = _quote(locator)
            parts = [stmt.action, locator, *(_quote(a) for a in stmt.args)]
            lines.append("    " + " ".join(parts))
        lines.append("")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Java-like import (pattern matching only, no AST)

_JAVA_METHOD = re.compile(r"public\s+void\s+([A-Za-z]\w*)\s*\(\s*\)[^{;]*\{")
_JAVA_STRING = re.compile(r'"((?:[^"\\]|\\.)*)"')
_JAVA_BY = re.compile(r'By\.(\w+)\(\s*"((?:[^"\\]|\\.)*)"\s*\)')
_JAVA_ASSERT = re.compile(r"^\s*(assert\w*)\s*\(")
_JAVA_CALL = re.compile(r"\.\s*(\w+)\s*\(")


def _java_bodies(source: str) -> Iterator[tuple[str, str]]:
    for m in _JAVA_METHOD.finditer(source):
        depth, pos, in_str = 1, m.end(), False
        while pos < len(source) and depth:
            ch = source[pos]
            if in_str:
                if ch == "\\":
                    pos += 1
                elif ch == '"':
                    in_str = False
            elif ch == '"':
                in_str = True
            elif ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
            pos += 1
        yield m.group(1), source[m.end() : pos - 1]


def _split_java_statements(body: str) -> list[str]:
    parts, current, in_str, escaped = [], [], False, False
    for ch in body:
        current.append(ch)
        if in_str:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_str = False
        elif ch == '"':
            in_str = True
        elif ch == ";":
            parts.append("".join(current[:-1]).strip())
            current = []
    return [p for p in parts if p]


def parse_java_like(source: str) -> TestSuite:
    """Extract ``action(locator, "literal"...)`` triples from Selenium-style Java.

    Each ``public void name()`` method becomes a test.  The locator is the first
    ``By.kind("value")`` in a statement (``-`` when absent); the action is the
    assertion name for ``assert*`` calls and the last chained method otherwise.
    """
    tests = []
    for name, body in _java_bodies(source):
        statements = []
        for text in _split_java_statements(body):
            by = _JAVA_BY.search(text)
            locator = f"{by.group(1)}={by.group(2)}" if by else NO_LOCATOR
            stripped = _JAVA_BY.sub("By()", text)
            assertion = _JAVA_ASSERT.match(stripped)
            if assertion:
                action = assertion.group(1)
            else:
                calls = _JAVA_CALL.findall(stripped)
                if not calls:
                    continue
                action = calls[-1]
            args = tuple(m.replace('\\"', '"') for m in _JAVA_STRING.findall(stripped))
            statements.append(Statement(action, locator, args))
        tests.append(TestCase(name, tuple(statements)))
    return TestSuite(tuple(tests))


# --------------------------------------------------------------------------
# Manifest


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SchemaError(message)


def parse_manifest(source: str) -> AppManifest:
    """Parse and validate a JSON application manifest."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"manifest is not valid JSON: {exc}") from None
    _require(isinstance(doc, dict), "manifest must be a JSON object")
    unknown = set(doc) - {
        "format_version",
        "actions",
        "input_submitting",
        "effects",
        "initial_state",
        "costs",
        "default_cost",
    }
    _require(not unknown, f"unknown manifest fields: {', '.join(sorted(unknown))}")

    actions = doc.get("actions")
    _require(isinstance(actions, dict) and actions, "'actions' must be a non-empty object")
    for action, arity in actions.items():
        _require(IDENTIFIER.match(action) is not None, f"invalid action name {action!r}")
        _require(
            isinstance(arity, int) and not isinstance(arity, bool) and arity >= 0,
            f"arity of {action!r} must be a non-negative integer",
        )
    # omitted: the default set, restricted to declared actions
    submitting = doc.get("input_submitting", sorted(DEFAULT_INPUT_SUBMITTING & set(actions)))
    _require(
        isinstance(submitting, list) and all(isinstance(a, str) for a in submitting),
        "'input_submitting' must be a list of action names",
    )
    catalog = ActionCatalog(dict(actions), frozenset(submitting))

    rules = []
    raw_rules = doc.get("effects", [])
    _require(isinstance(raw_rules, list), "'effects' must be a list")
    for i, raw in enumerate(raw_rules):
        where = f"effects[{i}]"
        _require(isinstance(raw, dict), f"{where} must be an object")
        action, locator = raw.get("action"), raw.get("locator")
        _require(action in catalog.arity, f"{where}: unknown action {action!r}")
        _require(isinstance(locator, str) and locator, f"{where}: 'locator' must be a string")
        _require(locator.count("*") <= 1, f"{where}: at most one '*' wildcard allowed")
        effects = []
        raw_effects = raw.get("effects")
        _require(isinstance(raw_effects, list), f"{where}: 'effects' must be a list")
        for j, eff in enumerate(raw_effects):
            _require(
                isinstance(eff, dict) and isinstance(eff.get("key"), str) and eff["key"],
                f"{where}.effects[{j}] needs a non-empty 'key'",
            )
            try:
                kind = EffectKind(eff.get("kind"))
            except ValueError:
                raise SchemaError(
                    f"{where}.effects[{j}]: kind must be WRITE, READ or DELETE"
                ) from None
            effect = Effect(kind, eff["key"])
            leftover = _PLACEHOLDER.sub("", effect.key_template)
            _require(
                "{" not in leftover and "}" not in leftover,
                f"{where}.effects[{j}]: only {{argN}} placeholders are allowed",
            )
            for index in effect.placeholders():
                if index >= catalog.arity[action]:
                    raise PlaceholderIndexOutOfRange(
                        f"{where}.effects[{j}]: {{arg{index}}} but {action!r} "
                        f"takes {catalog.arity[action]} argument(s)"
                    )
            effects.append(effect)
        rules.append(EffectRule(action, locator, tuple(effects)))

    initial = doc.get("initial_state", [])
    if isinstance(initial, list):
        _require(all(isinstance(k, str) for k in initial), "'initial_state' keys must be strings")
        initial = {k: "" for k in initial}
    _require(
        isinstance(initial, dict) and all(isinstance(v, str) for v in initial.values()),
        "'initial_state' must be a list of keys or an object of key -> value",
    )

    costs = doc.get("costs", {})
    _require(isinstance(costs, dict), "'costs' must be an object")
    default_cost = doc.get("default_cost", 1.0)
    for value in [*costs.values(), default_cost]:
        _require(
            isinstance(value, (int, float)) and not isinstance(value, bool) and value > 0,
            "costs must be positive numbers",
        )
    return AppManifest(
        catalog=catalog,
        rules=tuple(rules),
        initial_state=dict(initial),
        costs={k: float(v) for k, v in costs.items()},
        default_cost=float(default_cost),
    )


def manifest_to_dict(manifest: AppManifest) -> dict:
    return {
        "format_version": 1,
        "actions": dict(manifest.catalog.arity),
        "input_submitting": sorted(manifest.catalog.input_submitting),
        "effects": [
            {
                "action": rule.action,
                "locator": rule.locator,
                "effects": [
                    {"kind": e.kind.value, "key": e.key_template} for e in rule.effects
                ],
            }
            for rule in manifest.rules
        ],
        "initial_state": dict(manifest.initial_state),
        "costs": dict(manifest.costs),
        "default_cost": manifest.default_cost,
    }


def load_suite(path: str | os.PathLike, catalog: ActionCatalog | None = None) -> TestSuite:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".java"):
        return parse_java_like(text)
    return parse_suite(text, catalog, path=path)


def load_manifest(path: str | os.PathLike) -> AppManifest:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_manifest(text)
    except SchemaError as exc:
        raise type(exc)(f"{path}: {exc}") from None
