"""Synthetic corridor-navigation session with one obstacle-induced replan."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidScenario
from .path_monitor import MonitorConfig, is_significant, polyline_length
from .session import FrameRecord, Level, LogRecord, PlanSnapshot, SessionEvent

NAV_NODE = "navigation"
# nominal travel speed used to place the "goal reached" log, m/s
NOMINAL_SPEED = 1.0

Point = tuple[float, float]


@dataclass(frozen=True)
class ScenarioConfig:
    start: Point = (0.0, 0.0)
    goal: Point = (10.0, 0.0)
    obstacle_time: float = 2.0
    detour_apex: Point = (5.0, 2.0)
    frame_period: float = 1.0
    caption_hint: str = "a person's arm with blue and white stripes blocking the corridor"


def _lerp(a: Point, b: Point, frac: float) -> Point:
    return (a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1]))


def plans(cfg: ScenarioConfig) -> tuple[list[Point], list[Point]]:
    """Straight and detour polylines; the detour leaves the corridor at 40% and rejoins at 60%."""
    start, goal = tuple(map(float, cfg.start)), tuple(map(float, cfg.goal))
    enter, leave = _lerp(start, goal, 0.4), _lerp(start, goal, 0.6)
    apex = tuple(map(float, cfg.detour_apex))
    return [start, enter, leave, goal], [start, enter, apex, leave, goal]


def validate(cfg: ScenarioConfig, monitor: Optional[MonitorConfig] = None) -> None:
    monitor = monitor or MonitorConfig()
    if tuple(cfg.start) == tuple(cfg.goal):
        raise InvalidScenario("start and goal must differ")
    if not cfg.frame_period > 0:
        raise InvalidScenario("frame_period must be positive")
    if not cfg.obstacle_time > 0:
        raise InvalidScenario("obstacle_time must be positive")
    if not cfg.caption_hint:
        raise InvalidScenario("caption_hint must be non-empty")
    straight, detour = plans(cfg)
    if not all(math.isfinite(c) for p in straight + detour for c in p):
        raise InvalidScenario("coordinates must be finite")
    before, after = polyline_length(straight), polyline_length(detour)
    if not is_significant(before, after, monitor):
        raise InvalidScenario(
            f"detour length {after:.4f} m vs straight {before:.4f} m is below the detection "
            f"threshold (ratio > {monitor.ratio_threshold}, increase >= {monitor.min_abs_increase} m)"
        )


def generate(cfg: Optional[ScenarioConfig] = None, monitor: Optional[MonitorConfig] = None) -> list[SessionEvent]:
    cfg = cfg or ScenarioConfig()
    monitor = monitor or MonitorConfig()
    validate(cfg, monitor)
    straight, detour = plans(cfg)
    end_t = max(polyline_length(detour) / NOMINAL_SPEED, cfg.obstacle_time + cfg.frame_period)

    events: list[SessionEvent] = [
        LogRecord(0.0, Level.INFO, NAV_NODE, "navigation started from S to G"),
        PlanSnapshot(0.0, tuple(straight)),
        PlanSnapshot(float(cfg.obstacle_time), tuple(detour)),
    ]
    frame_times = []
    k = 0
    while k * cfg.frame_period <= end_t:
        frame_times.append(k * cfg.frame_period)
        k += 1
    # the replan moment must have a frame the monitor can pair with
    if min(abs(t - cfg.obstacle_time) for t in frame_times) > monitor.sync_tolerance:
        frame_times.append(float(cfg.obstacle_time))
    events += [FrameRecord(t, caption_hint=cfg.caption_hint) for t in sorted(frame_times)]
    events.append(LogRecord(end_t, Level.INFO, NAV_NODE, "goal reached"))
    events.sort(key=lambda e: e.t)
    return events
