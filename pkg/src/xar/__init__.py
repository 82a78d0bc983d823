"""Retrieval-augmented explanations of autonomous-robot behavior from recorded logs."""

from .embedder import EmbedConfig, cosine_similarity, embed, hash_embed
from .path_monitor import DeviationEvent, MonitorConfig, PathMonitor, path_length, sync_frame
from .perception import CaptionBackendConfig, caption, inject_event_logs
from .rag import ExplanationResult, RagConfig, answer, build_context, render_prompt
from .scenario import ScenarioConfig, generate
from .session import FrameRecord, Level, LogRecord, PlanSnapshot, parse_session, write_session
from .vector_store import EmbeddedDocument, VectorStore

__version__ = "0.1.0"
