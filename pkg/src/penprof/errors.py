"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1, ComputeError -> 2,
OSError -> 3.
"""


class PenprofError(Exception):
    """Base class for package errors."""


class ValidationError(PenprofError):
    """Bad input data or configuration."""


class ParseError(ValidationError):
    """Malformed input file row."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class ComputeError(PenprofError):
    """Numerical procedure failed (e.g. iteration cap exceeded)."""
