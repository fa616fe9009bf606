"""Exception hierarchy shared across the package."""


class DcParetoError(Exception):
    """Base class for all package errors."""


class DomainError(DcParetoError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateHeadError(DcParetoError, ValueError):
    """The head CDF at the splice point underflows, so the weight is undefined."""


class DegenerateDataError(DcParetoError, ValueError):
    """The sample cannot support the requested fit (e.g. all zeros)."""


class FormatError(DcParetoError, ValueError):
    """A CSV input is missing a required column or is otherwise malformed."""


class RowError(DcParetoError, ValueError):
    """A single CSV row could not be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyWindowError(DcParetoError, ValueError):
    """A date window selected no observations."""
