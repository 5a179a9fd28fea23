"""Exception types shared across sdlkit."""

from __future__ import annotations


class SDLSyntaxError(SyntaxError):
    """Raised for malformed formula or system text.

    Carries the 1-based ``line`` and ``column`` of the offending token and the
    sorted set of tokens that would have been accepted there.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: frozenset[str] = frozenset(), text: str | None = None):
        self.reason = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = message
        if self.expected:
            detail += " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"line {line}, column {column}: {detail}")
        self.lineno = line
        self.offset = column
        self.text = text
        self.msg = detail


class DuplicateNameError(ValueError):
    """A system file declares more than one ``system`` header."""


class EmptySystemError(ValueError):
    """A normative system has no formulas to analyse."""


class UnknownAtomError(KeyError):
    """An atom is not part of the vocabulary it is evaluated against."""

    def __init__(self, name: str, suggestions: list[str] | None = None):
        self.name = name
        self.suggestions = list(suggestions or [])
        super().__init__(name)

    def __str__(self) -> str:
        msg = f"unknown atom {self.name!r}"
        if self.suggestions:
            msg += "; did you mean " + " or ".join(repr(s) for s in self.suggestions) + "?"
        return msg


class ResourceLimitError(RuntimeError):
    """The tableau exceeded its node cap. This is never a verdict."""


class BoundExceededError(ValueError):
    """A bounded model search was configured beyond its enumeration limits."""
