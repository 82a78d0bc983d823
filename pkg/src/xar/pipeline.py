"""Ingest and query workflows shared by the CLI and the ask-service."""

from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import asdict, dataclass
from typing import Optional

from .config import AppConfig
from .embedder import make_embedder
from .errors import EmptyStore, StorageError
from .path_monitor import PathMonitor
from .perception import caption, deviation_log, inject_event_logs
from .rag import ExplanationResult, answer
from .session import FrameRecord, Level, LogRecord, PlanSnapshot, SessionEvent
from .vector_store import INSERTED, VectorStore

log = logging.getLogger(__name__)


@dataclass
class IngestSummary:
    records_ingested: int = 0
    deviations_detected: int = 0
    captions_injected: int = 0
    duplicates_skipped: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def expand_logs(events: list[SessionEvent], cfg: AppConfig, summary: IngestSummary) -> list[LogRecord]:
    """Run the replanning monitor over ``events`` and return the log stream with
    the deviation and caption records spliced in at each event's position."""
    monitor = PathMonitor(cfg.monitor_config())
    caption_cfg = cfg.caption_config()
    # the whole session is at hand, so frames slightly after a replan are eligible too
    frames = [e for e in events if isinstance(e, FrameRecord)]
    logs: list[LogRecord] = []
    for event in events:
        if isinstance(event, LogRecord):
            logs.append(event)
        elif isinstance(event, PlanSnapshot):
            deviation = monitor.observe(event, frames)
            if deviation is None:
                continue
            summary.deviations_detected += 1
            if deviation.frame is None:
                log.warning("no camera frame near replan at t=%.3f; logging deviation without caption", deviation.t)
                logs.append(deviation_log(deviation))
                continue
            logs.extend(inject_event_logs(deviation, caption(deviation.frame, caption_cfg)))
            summary.captions_injected += 1
    return logs


def ingest(events: list[SessionEvent], store: VectorStore, cfg: AppConfig) -> IngestSummary:
    summary = IngestSummary()
    min_level = Level.parse(cfg.min_level)
    embedder = make_embedder(cfg.embed_config())
    for record in expand_logs(events, cfg, summary):
        if record.level < min_level:
            continue
        if store.add_document(record, embedder.embed(record.msg)) == INSERTED:
            summary.records_ingested += 1
        else:
            summary.duplicates_skipped += 1
    return summary


def read_store(path: str, missing_ok: bool = True) -> VectorStore:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except FileNotFoundError:
        if missing_ok:
            return VectorStore()
        raise EmptyStore() from None
    except OSError as exc:
        raise StorageError(f"cannot read store {path}: {exc}") from None
    return VectorStore.load(data)


def write_store(store: VectorStore, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".xar-store-")
        with os.fdopen(fd, "wb") as fh:
            fh.write(store.save())
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageError(f"cannot write store {path}: {exc}") from None


def ask(question: str, store: VectorStore, cfg: AppConfig, k: Optional[int] = None, embedder=None) -> ExplanationResult:
    if not len(store):
        raise EmptyStore()
    embedder = embedder or make_embedder(cfg.embed_config())
    return answer(question, store, cfg.rag_config(k), embedder)
