"""Exception hierarchy shared by all tranchelab modules."""

from __future__ import annotations

from dataclasses import dataclass


class TranchelabError(Exception):
    """Base class for every error raised by the package."""


@dataclass(frozen=True)
class Violation:
    field: str
    reason: str
    kind: str = "InvalidParameter"

    def __str__(self) -> str:
        return f"{self.kind}: {self.field}: {self.reason}"


class InvalidParameter(TranchelabError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


class ScenarioError(TranchelabError):
    """Raised by ``validate_scenario``; carries every violation found."""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = list(violations)


class NonFiniteInput(TranchelabError):
    pass


class EmptyPanel(TranchelabError):
    pass


class TooFewCountries(TranchelabError):
    pass


class DegenerateMargins(TranchelabError):
    pass


class NotSymmetric(TranchelabError):
    pass


class InvalidYear(TranchelabError):
    pass


class PdOutOfRange(TranchelabError):
    pass


class EmptyInput(TranchelabError):
    pass


class EmptyPlan(TranchelabError):
    pass


class InvalidSubordination(TranchelabError):
    pass


class WeightMismatch(TranchelabError):
    pass


class MissingFlags(TranchelabError):
    pass


class UnknownScheme(TranchelabError):
    pass


class MalformedCsv(TranchelabError):
    pass


class UnknownCountryCode(TranchelabError):
    pass


class DuplicateCell(TranchelabError):
    pass
