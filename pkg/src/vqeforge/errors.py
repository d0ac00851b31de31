"""Exception types shared across the package.

The CLI maps each class to a distinct exit status.
"""

from __future__ import annotations


class VqeForgeError(Exception):
    """Base class for all package errors."""


class InputFormatError(VqeForgeError, ValueError):
    """A text input (Hamiltonian, coefficient or graph file) is malformed."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)
        self.line = line
        self.source = source


class NumericError(VqeForgeError, ArithmeticError):
    """A numerical routine produced a non-finite or inconsistent result."""


class OracleLimitError(VqeForgeError, ValueError):
    """A dense oracle was asked for a system larger than the configured limit."""
