"""Exception hierarchy shared by the library and the CLI.

Each error carries the CLI exit code it maps to:
0 success, 1 definite negative (not an error), 2 usage / hypothesis error, 3 resource exhaustion.
"""


class FullRankError(Exception):
    """Base class of every error raised by this package."""

    exit_code: int = 2

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UsageError(FullRankError):
    """Bad input: field or shape mismatch, out-of-range parameter, singular transform."""

    exit_code = 2


class FieldMismatchError(UsageError):
    pass


class ShapeMismatchError(UsageError):
    pass


class ParseError(UsageError):
    """Malformed matrix / subspace text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HypothesisError(UsageError):
    """The inputs violate a theorem's hypothesis (e.g. rk N >= p)."""


class ResourceExhaustedError(FullRankError):
    """An element or case budget was exceeded."""

    exit_code = 3

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget
