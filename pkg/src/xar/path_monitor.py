"""Replanning detection over a stream of planned paths."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import NoFrameInTolerance, OutOfOrderPlan
from .session import TIME_EPS, FrameRecord, PlanSnapshot


@dataclass(frozen=True)
class MonitorConfig:
    ratio_threshold: float = 1.2
    min_abs_increase: float = 0.25
    sync_tolerance: float = 0.5

    def __post_init__(self):
        if not self.ratio_threshold > 1:
            raise ValueError("ratio_threshold must be > 1")
        if not self.min_abs_increase >= 0:
            raise ValueError("min_abs_increase must be >= 0")
        if not self.sync_tolerance > 0:
            raise ValueError("sync_tolerance must be > 0")


@dataclass(frozen=True)
class DeviationEvent:
    t: float
    old_length: float
    new_length: float
    frame: Optional[FrameRecord] = None


def polyline_length(points: Sequence[Sequence[float]]) -> float:
    return sum(math.hypot(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(points, points[1:]))


def path_length(plan: PlanSnapshot) -> float:
    return polyline_length(plan.poses)


def is_significant(baseline: float, new_length: float, cfg: MonitorConfig) -> bool:
    return new_length > cfg.ratio_threshold * baseline and new_length - baseline >= cfg.min_abs_increase


def sync_frame(event_t: float, frames: Sequence[FrameRecord], tolerance: float) -> FrameRecord:
    """Return the frame closest in time to ``event_t``.

    On equal gaps the earlier frame wins. Raises NoFrameInTolerance when the
    closest frame is more than ``tolerance`` seconds away.
    """
    best = None
    best_gap = math.inf
    for frame in frames:
        gap = abs(frame.t - event_t)
        # strict comparison keeps the earlier of two equidistant frames
        if gap < best_gap:
            best, best_gap = frame, gap
    if best is None or best_gap > tolerance:
        raise NoFrameInTolerance(event_t, tolerance)
    return best


class PathMonitor:
    """Stateful detector fed one PlanSnapshot at a time.

    ``baseline`` is the shortest plan length seen since the last deviation, so
    a plan that shrinks as the robot advances lowers the reference instead of
    hiding a later detour.
    """

    def __init__(self, cfg: Optional[MonitorConfig] = None):
        self.cfg = cfg or MonitorConfig()
        self.baseline: Optional[float] = None
        self.last_t: Optional[float] = None

    def observe(self, plan: PlanSnapshot, frames: Sequence[FrameRecord] = ()) -> Optional[DeviationEvent]:
        if self.last_t is not None and plan.t < self.last_t - TIME_EPS:
            raise OutOfOrderPlan(f"plan at t={plan.t} precedes previous plan at t={self.last_t}")
        self.last_t = max(plan.t, self.last_t) if self.last_t is not None else plan.t
        length = path_length(plan)
        if self.baseline is None:
            self.baseline = length
            return None
        if not is_significant(self.baseline, length, self.cfg):
            self.baseline = min(self.baseline, length)
            return None
        eligible = [f for f in frames if f.t <= plan.t + self.cfg.sync_tolerance]
        try:
            frame = sync_frame(plan.t, eligible, self.cfg.sync_tolerance)
        except NoFrameInTolerance:
            frame = None
        event = DeviationEvent(plan.t, self.baseline, length, frame)
        self.baseline = length
        return event


def observe_plan(
    monitor: PathMonitor, plan: PlanSnapshot, frames_so_far: Sequence[FrameRecord] = ()
) -> Optional[DeviationEvent]:
    return monitor.observe(plan, frames_so_far)
