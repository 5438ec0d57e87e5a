"""Exception hierarchy for webtestdeps."""

from __future__ import annotations


class WebTestDepsError(Exception):
    """Base class for every error raised by this package."""


class InputError(WebTestDepsError):
    """Invalid or inconsistent user input (maps to CLI exit code 1)."""


class SuiteSyntaxError(InputError):
    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class DuplicateTestName(SuiteSyntaxError):
    pass


class UnknownAction(SuiteSyntaxError):
    pass


class SchemaError(InputError):
    pass


class PlaceholderIndexOutOfRange(SchemaError):
    pass


class UnknownTestName(InputError):
    pass


class BaselineFailure(InputError):
    def __init__(self, failed: list[str]):
        self.failed = failed
        super().__init__(
            "suite fails in its original order: " + ", ".join(failed)
        )


class UnknownValue(InputError):
    pass


class NonInteractiveWithoutAssumptions(InputError):
    pass


class InversionImpossible(WebTestDepsError):
    """The target prerequisite is still reachable through another path."""


class EmptyWorklist(WebTestDepsError):
    pass


class IterationBudgetExceeded(WebTestDepsError):
    pass


class GraphNotValidated(WebTestDepsError):
    pass


class EmptyScheduleSet(WebTestDepsError):
    pass


class SoundnessViolation(WebTestDepsError):
    def __init__(self, schedule: tuple[str, ...], test: str):
        self.schedule = schedule
        self.test = test
        super().__init__(
            f"test {test!r} fails in derived schedule <{', '.join(schedule)}>"
        )
