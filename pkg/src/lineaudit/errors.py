"""Exception types shared across the toolkit."""

from __future__ import annotations


class LineAuditError(Exception):
    """Base class for all domain errors raised by this package."""


class CorpusFormatError(LineAuditError):
    """A corpus or marker file could not be parsed.

    Carries the 1-based row number of the offending input line when known.
    """

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DuplicateIdError(LineAuditError):
    """Two records share the same line id."""


class UnknownPageError(LineAuditError):
    """A page id is not present in the corpus."""


class UnknownLineError(LineAuditError):
    """A line id is not present in the corpus."""


class MissingPredictionError(LineAuditError):
    """One or more lines lack a prediction under the requested model."""

    def __init__(self, model: str, line_ids: list[str]):
        self.model = model
        self.line_ids = sorted(line_ids)
        shown = ", ".join(self.line_ids[:10])
        if len(self.line_ids) > 10:
            shown += f", ... ({len(self.line_ids)} total)"
        super().__init__(f"no prediction under model {model!r} for: {shown}")


class EmptySubsetError(LineAuditError):
    """An operation that requires at least one line received none."""


class AnnotationInvariantError(LineAuditError):
    """An annotation submission violates a record invariant."""


class VersionConflictError(LineAuditError):
    """Optimistic version check failed; another annotation won the race.

    ``current`` holds the record that is currently authoritative so the
    caller can surface it to the losing writer.
    """

    def __init__(self, line_id: str, expected: int, current):
        self.line_id = line_id
        self.expected = expected
        self.current = current
        super().__init__(
            f"line {line_id!r}: expected version {expected}, "
            f"store has version {current.version if current else 0}"
        )
