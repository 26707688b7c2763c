"""Exception types shared across the toolkit."""
from __future__ import annotations


class AspdimError(Exception):
    """Base class for all toolkit errors."""


class ParseError(AspdimError):
    """Malformed program text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class SafetyError(AspdimError):
    """A rule uses a variable outside its positive body."""

    def __init__(self, variable: str, rule_text: str):
        super().__init__(f"unsafe variable {variable} in rule: {rule_text}")
        self.variable = variable
        self.rule_text = rule_text


class ArityError(AspdimError):
    """A predicate occurs with two different arities."""

    def __init__(self, predicate: str, seen: int, expected: int):
        super().__init__(
            f"predicate {predicate} used with arity {seen} and arity {expected}"
        )
        self.predicate = predicate


class DomainError(AspdimError):
    """A constant set is not within the Herbrand universe of the program."""


class SizeGuardError(AspdimError):
    """An exhaustive operation was refused because the instance is too large."""

    def __init__(self, what: str, actual: int, limit: int):
        super().__init__(f"{what}: {actual} atoms exceeds the limit of {limit}")
        self.what = what
        self.actual = actual
        self.limit = limit


class NonNormalProgramError(AspdimError):
    """An operation defined for normal rules was given a disjunctive head."""


class GuardPlacementError(AspdimError):
    """A guard placement violates one of the guarded-program conditions."""

    def __init__(self, conditions: tuple[int, ...], detail: str):
        super().__init__(f"guard placement violates condition(s) {conditions}: {detail}")
        self.conditions = conditions


class HeuristicError(AspdimError):
    """Incompatible heuristic mode / instance family pairing."""


class GroundingInterrupted(AspdimError):
    """Cooperative deadline hit during grounding; carries partial output."""

    def __init__(self, partial):
        super().__init__("grounding interrupted by deadline")
        self.partial = partial
