"""Shared diagnostic and source-location types used by every pipeline stage."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """A half-open byte range in the input, plus the 1-based line/column of its start."""

    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"span start {self.start} > end {self.end}")


@dataclass(frozen=True, slots=True)
class Diagnostic:
    """A finding with a stable rule code.

    ``location`` is a :class:`SourceSpan` for textual findings, an object id
    or path string for model-level findings, or ``None``.
    """

    severity: str
    code: str
    message: str
    location: SourceSpan | str | None = None

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def render(self, filename: str = "<input>") -> str:
        """One-line ``severity code file:line:col message`` form."""
        if isinstance(self.location, SourceSpan):
            where = f"{filename}:{self.location.line}:{self.location.column}"
        elif self.location:
            where = self.location
        else:
            where = filename
        return f"{self.severity} {self.code} {where} {self.message}"

    def to_json(self) -> dict:
        loc: dict | str | None
        if isinstance(self.location, SourceSpan):
            loc = {
                "start": self.location.start,
                "end": self.location.end,
                "line": self.location.line,
                "column": self.location.column,
            }
        else:
            loc = self.location
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "location": loc,
        }


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)


def errors_only(diagnostics) -> list[Diagnostic]:
    return [d for d in diagnostics if d.is_error]
