"""Exception hierarchy.

The three top-level families map onto the CLI exit codes: ``InputError`` (2),
``BackendError`` (3) and ``StorageError`` (4).
"""

from __future__ import annotations


class XarError(Exception):
    exit_code = 1


class InputError(XarError, ValueError):
    exit_code = 2


class BackendError(XarError, RuntimeError):
    exit_code = 3


class StorageError(XarError, OSError):
    exit_code = 4


# -- session files ----------------------------------------------------------


class MalformedLine(InputError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnknownKind(MalformedLine):
    def __init__(self, line: int, kind: object):
        self.kind = kind
        super().__init__(line, f"unknown kind {kind!r}")


class NonMonotonicTimestamp(MalformedLine):
    def __init__(self, line: int, t: float, previous: float):
        super().__init__(line, f"timestamp {t!r} precedes previous timestamp {previous!r}")


class InvariantViolation(InputError):
    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"event {index}: {reason}")


# -- path monitoring ----------------------------------------------------------


class OutOfOrderPlan(InputError):
    pass


class NoFrameInTolerance(LookupError, XarError):
    def __init__(self, event_t: float, tolerance: float):
        self.event_t = event_t
        self.tolerance = tolerance
        super().__init__(f"no camera frame within {tolerance}s of t={event_t}")


class InvalidScenario(InputError):
    pass


# -- backends ---------------------------------------------------------------


class BackendUnavailable(BackendError):
    def __init__(self, url: str, cause: object):
        self.url = url
        self.cause = cause
        super().__init__(f"backend at {url} unavailable: {cause}")


class BackendTimeout(BackendError):
    pass


class EmptyCaption(BackendError):
    pass


class EmptyAnswer(BackendError):
    pass


class MissingCaptionHint(BackendError):
    pass


class MissingImage(BackendError):
    pass


# -- knowledge base -----------------------------------------------------------


class DimensionMismatch(InputError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")


class EmptyStore(InputError):
    def __init__(self, message: str = "knowledge base is empty"):
        super().__init__(message)


class CorruptStoreFile(StorageError):
    pass


class VersionMismatch(StorageError):
    pass


class BadTemplate(InputError):
    pass


class BackendDimensionMismatch(DimensionMismatch):
    """A remote embedder changed its vector length between calls."""

    exit_code = 3
