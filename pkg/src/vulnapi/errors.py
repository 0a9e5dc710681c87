"""Exception hierarchy shared by every pipeline stage."""

from __future__ import annotations


class VapiError(Exception):
    """Base class for all errors raised by vulnapi."""


class ParseError(VapiError):
    def __init__(self, message: str, path: str = "<string>", line: int = 0, column: int = 0):
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {message}")


class IngestError(VapiError):
    """Unreadable or missing input (advisories, library store, snapshots)."""


class SchemaError(IngestError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = f"line {line}: " if line is not None else ""
        what = f"field {field!r}: " if field else ""
        super().__init__(f"{where}{what}{message}")


class MissingVersion(VapiError):
    """No adjacent vulnerable version or no patch release version is available."""


class AllDiscarded(VapiError):
    """Every patch method of a CVE was discarded during version-level localization."""


class DuplicateEntry(VapiError):
    """Two database entries share (gav, cve, method)."""


class DomainError(VapiError, ValueError):
    """Argument outside an operation's domain."""


class StageError(VapiError):
    """A fatal error tagged with the pipeline stage it came from."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
