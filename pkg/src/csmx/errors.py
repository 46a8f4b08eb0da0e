"""Exception types shared across the package."""

from __future__ import annotations


class CsmError(Exception):
    """Base class for all errors raised by this package."""


class ProjectionError(CsmError):
    """Invalid projection index set (empty, out of range, or duplicated)."""


class ParseError(CsmError):
    """Malformed input row; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class MappingError(CsmError):
    """Activity could not be mapped to an (artifact, state) pair."""


class ConflictError(CsmError):
    """Two events assign different states to one artifact at one timestamp."""


class EmptyLogError(CsmError):
    """Operation needs at least one trace / one transition and found none."""


class ConformanceError(CsmError):
    """A sequence does not replay on the model it is annotated against."""


class QueryError(CsmError):
    """Malformed interaction query (unknown measure, bad threshold, ...)."""


class NotFoundError(CsmError):
    """Named artifact, state or transition does not exist in the model."""
