"""Recorded-session data model and the JSON Lines session format.

A session file holds one JSON object per line. The ``kind`` key selects the
record type::

    {"kind":"log","t":0.0,"level":"INFO","node":"nav","msg":"goal accepted"}
    {"kind":"plan","t":1.0,"poses":[[0.0,0.0],[3.0,4.0]]}
    {"kind":"image","t":1.0,"image_ref":"frames/0001.png","caption_hint":null}

Timestamps are seconds since session start and must not decrease by more
than ``TIME_EPS`` from one line to the next.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import InvariantViolation, MalformedLine, NonMonotonicTimestamp, UnknownKind

TIME_EPS = 1e-9


class Level(enum.IntEnum):
    DEBUG = 10
    INFO = 20
    WARN = 30
    ERROR = 40

    @classmethod
    def parse(cls, value: str) -> "Level":
        try:
            return cls[value]
        except KeyError:
            raise ValueError(f"unknown log level {value!r}") from None


@dataclass(frozen=True)
class LogRecord:
    t: float
    level: Level
    node: str
    msg: str

    def validate(self) -> None:
        _check_time(self.t)
        if not isinstance(self.level, Level):
            raise ValueError(f"level must be a Level, got {self.level!r}")
        if not isinstance(self.node, str) or not self.node:
            raise ValueError("node must be a non-empty string")
        if not isinstance(self.msg, str) or not self.msg:
            raise ValueError("msg must be a non-empty string")


@dataclass(frozen=True)
class PlanSnapshot:
    t: float
    poses: tuple[tuple[float, float], ...]

    def validate(self) -> None:
        _check_time(self.t)
        if not self.poses:
            raise ValueError("poses must be non-empty")
        for pose in self.poses:
            if len(pose) != 2 or not all(_is_real(c) and math.isfinite(c) for c in pose):
                raise ValueError(f"pose {pose!r} is not a finite (x, y) pair")


@dataclass(frozen=True)
class FrameRecord:
    t: float
    image_ref: Optional[str] = None
    caption_hint: Optional[str] = None

    def validate(self) -> None:
        _check_time(self.t)
        if self.image_ref is None and self.caption_hint is None:
            raise ValueError("frame needs image_ref or caption_hint")
        for name in ("image_ref", "caption_hint"):
            value = getattr(self, name)
            if value is not None and not isinstance(value, str):
                raise ValueError(f"{name} must be a string")


SessionEvent = Union[LogRecord, PlanSnapshot, FrameRecord]

_KINDS = {"log": LogRecord, "plan": PlanSnapshot, "image": FrameRecord}
_FIELDS = {
    "log": {"t", "level", "node", "msg"},
    "plan": {"t", "poses"},
    "image": {"t", "image_ref", "caption_hint"},
}
_REQUIRED = {"log": {"t", "level", "node", "msg"}, "plan": {"t", "poses"}, "image": {"t"}}


def _is_real(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_time(t: object) -> None:
    if not _is_real(t) or not math.isfinite(t):
        raise ValueError(f"t must be a finite number, got {t!r}")
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t!r}")


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def _decode(kind: str, obj: dict) -> SessionEvent:
    extra = set(obj) - _FIELDS[kind]
    if extra:
        raise ValueError(f"unexpected keys {sorted(extra)}")
    missing = _REQUIRED[kind] - set(obj)
    if missing:
        raise ValueError(f"missing keys {sorted(missing)}")
    t = obj["t"]
    _check_time(t)
    t = float(t)
    if kind == "log":
        if not isinstance(obj["level"], str):
            raise ValueError("level must be a string")
        event: SessionEvent = LogRecord(t, Level.parse(obj["level"]), obj["node"], obj["msg"])
    elif kind == "plan":
        poses = obj["poses"]
        if not isinstance(poses, list):
            raise ValueError("poses must be a list")
        converted = []
        for pose in poses:
            if not isinstance(pose, list) or len(pose) != 2 or not all(_is_real(c) for c in pose):
                raise ValueError(f"pose {pose!r} is not an [x, y] pair")
            converted.append((float(pose[0]), float(pose[1])))
        event = PlanSnapshot(t, tuple(converted))
    else:
        event = FrameRecord(t, obj.get("image_ref"), obj.get("caption_hint"))
    event.validate()
    return event


def parse_session(data: Union[bytes, str]) -> list[SessionEvent]:
    """Parse a session stream. Blank lines are ignored; every other problem raises."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedLine(0, f"not valid UTF-8: {exc}") from None
    events: list[SessionEvent] = []
    previous_t: Optional[float] = None
    for lineno, line in enumerate(data.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line, parse_constant=_reject_constant)
        except ValueError as exc:
            raise MalformedLine(lineno, f"invalid JSON: {exc}") from None
        if not isinstance(obj, dict):
            raise MalformedLine(lineno, "line is not a JSON object")
        if "kind" not in obj:
            raise MalformedLine(lineno, "missing 'kind'")
        kind = obj.pop("kind")
        if kind not in _KINDS:
            raise UnknownKind(lineno, kind)
        try:
            event = _decode(kind, obj)
        except (ValueError, TypeError) as exc:
            raise MalformedLine(lineno, str(exc)) from None
        if previous_t is not None and event.t < previous_t - TIME_EPS:
            raise NonMonotonicTimestamp(lineno, event.t, previous_t)
        previous_t = event.t
        events.append(event)
    return events


def event_to_dict(event: SessionEvent) -> dict:
    if isinstance(event, LogRecord):
        return {"kind": "log", "t": event.t, "level": event.level.name, "node": event.node, "msg": event.msg}
    if isinstance(event, PlanSnapshot):
        return {"kind": "plan", "t": event.t, "poses": [[x, y] for x, y in event.poses]}
    if isinstance(event, FrameRecord):
        out = {"kind": "image", "t": event.t}
        if event.image_ref is not None:
            out["image_ref"] = event.image_ref
        if event.caption_hint is not None:
            out["caption_hint"] = event.caption_hint
        return out
    raise TypeError(f"not a session event: {event!r}")


def write_session(events: Iterable[SessionEvent]) -> bytes:
    """Serialize events to the session format; validates before writing anything."""
    lines = []
    previous_t: Optional[float] = None
    for index, event in enumerate(events):
        if not isinstance(event, (LogRecord, PlanSnapshot, FrameRecord)):
            raise InvariantViolation(index, f"not a session event: {type(event).__name__}")
        try:
            event.validate()
        except ValueError as exc:
            raise InvariantViolation(index, str(exc)) from None
        if previous_t is not None and event.t < previous_t - TIME_EPS:
            raise InvariantViolation(index, "events are not time-ordered")
        previous_t = event.t
        lines.append(json.dumps(event_to_dict(event), ensure_ascii=False, separators=(",", ":"), allow_nan=False))
    return "".join(line + "\n" for line in lines).encode("utf-8")
