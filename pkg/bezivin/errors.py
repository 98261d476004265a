"""Exceptions raised by bezivin.

Absence (no certificate, no coordinates, no global form) is always returned as a value.
Exceptions are reserved for bad input and for honest capability limits.
"""

from typing import Optional


class BezivinError(Exception):
    """Base class of every error raised by this package."""

    exit_code = 1


class InputError(BezivinError, ValueError):
    """The input is malformed or violates a precondition."""

    exit_code = 2


class ParseError(InputError):
    """A syntax error inside an expression or literal.

    Args:
      text: The complete source text.
      line: 1-based line of the offending token.
      column: 1-based column of the offending token.
      message: What went wrong.
    """

    def __init__(
        self,
        text: str,
        line: int,
        column: int,
        message: Optional[str] = None,
    ) -> None:
        self.text = text
        self.line = line
        self.column = column
        self.message = message or "syntax error"
        super().__init__(f"{self.message} (line {line}, column {column})")

    def render(self) -> str:
        """Returns the offending line with a caret under the error position."""
        lines = self.text.splitlines() or [""]
        source = lines[min(self.line, len(lines)) - 1]
        return f"{self.message}:\n  {source}\n  {' ' * (self.column - 1)}^"


class CapabilityError(BezivinError):
    """A configured limit was hit; the answer is unknown, never wrong."""

    exit_code = 3


class VerificationError(CapabilityError):
    """An exact identity check failed after a construction."""
