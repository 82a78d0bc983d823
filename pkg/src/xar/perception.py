"""Camera-frame captioning and injection of deviation logs."""

from __future__ import annotations

import base64
from dataclasses import dataclass
from typing import Optional

from . import _http
from .embedder import BackendMode
from .errors import BackendError, EmptyCaption, MissingCaptionHint, MissingImage
from .path_monitor import DeviationEvent
from .session import FrameRecord, Level, LogRecord

MONITOR_NODE = "explainability_monitor"
CAPTION_MARKER = "image-to-text: "
DEFAULT_CAPTION_PROMPT = "Describe the image concisely."


@dataclass(frozen=True)
class CaptionBackendConfig:
    mode: BackendMode = BackendMode.FAKE
    endpoint_url: Optional[str] = None
    timeout: float = 30.0
    model_name: Optional[str] = None
    prompt: str = DEFAULT_CAPTION_PROMPT

    def __post_init__(self):
        object.__setattr__(self, "mode", BackendMode.parse(self.mode))
        if self.mode is BackendMode.HTTP and not self.endpoint_url:
            raise ValueError("HTTP caption backend requires endpoint_url")


def caption(frame: FrameRecord, cfg: CaptionBackendConfig) -> str:
    """Describe ``frame`` in text.

    The fake backend returns the frame's ``caption_hint`` unchanged; the HTTP
    backend uploads the image file at ``image_ref`` and ignores the hint.
    """
    if cfg.mode is BackendMode.FAKE:
        if not frame.caption_hint:
            raise MissingCaptionHint(f"frame at t={frame.t} has no caption_hint")
        return frame.caption_hint

    if not frame.image_ref:
        raise MissingImage(f"frame at t={frame.t} has no image_ref")
    try:
        with open(frame.image_ref, "rb") as fh:
            image = fh.read()
    except OSError as exc:
        raise MissingImage(f"cannot read {frame.image_ref}: {exc}") from exc

    url = cfg.endpoint_url.rstrip("/") + "/caption"
    payload = {
        "model": cfg.model_name,
        "image_base64": base64.b64encode(image).decode("ascii"),
        "prompt": cfg.prompt,
    }
    body = _http.post_json(url, payload, cfg.timeout)
    if not isinstance(body, dict) or "caption" not in body:
        raise BackendError(f"{url} reply has no 'caption' field")
    text = body["caption"]
    if not isinstance(text, str):
        raise BackendError(f"{url} returned a non-string caption")
    if not text.strip():
        raise EmptyCaption(f"{url} returned an empty caption")
    return text


def deviation_log(event: DeviationEvent) -> LogRecord:
    return LogRecord(
        event.t,
        Level.WARN,
        MONITOR_NODE,
        f"path length increased from {event.old_length:.3f} m to {event.new_length:.3f} m; "
        "possible obstacle, distance to the goal increasing",
    )


def inject_event_logs(event: DeviationEvent, caption_text: str) -> list[LogRecord]:
    if not caption_text:
        raise ValueError("caption_text must be non-empty")
    return [
        deviation_log(event),
        LogRecord(event.t, Level.INFO, MONITOR_NODE, CAPTION_MARKER + caption_text),
    ]
