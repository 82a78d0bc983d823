"""Retrieval, prompt assembly and the language-model call."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import _http
from .embedder import BackendMode
from .errors import BackendError, BadTemplate, EmptyAnswer, EmptyStore
from .session import Level, LogRecord
from .vector_store import VectorStore

DEFAULT_TEMPLATE = (
    "You are an explainability assistant for an autonomous robot.\n"
    "Use ONLY the context below, which contains the robot's most relevant logs.\n\n"
    "Context:\n{context}\n\n"
    "Question: {question}\n\n"
    "Answer:"
)
FAKE_ANSWER_PREFIX = "ECHO:\n"

_PLACEHOLDER = re.compile(r"\{context\}|\{question\}")


@dataclass(frozen=True)
class LLMConfig:
    mode: BackendMode = BackendMode.FAKE
    endpoint_url: Optional[str] = None
    timeout: float = 60.0
    model_name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", BackendMode.parse(self.mode))
        if self.mode is BackendMode.HTTP and not self.endpoint_url:
            raise ValueError("HTTP LLM backend requires endpoint_url")


@dataclass(frozen=True)
class RagConfig:
    k: int = 5
    template: str = DEFAULT_TEMPLATE
    min_level: Level = Level.DEBUG
    llm: LLMConfig = field(default_factory=LLMConfig)

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("k must be a positive integer")
        check_template(self.template)


@dataclass(frozen=True)
class ExplanationResult:
    answer: str
    context: list[tuple[LogRecord, float]]
    prompt: str

    def to_dict(self) -> dict:
        return {
            "answer": self.answer,
            "context": [
                {"t": r.t, "level": r.level.name, "node": r.node, "msg": r.msg, "similarity": sim}
                for r, sim in self.context
            ],
            "prompt": self.prompt,
        }


def check_template(template: str) -> None:
    for name in ("context", "question"):
        count = template.count("{" + name + "}")
        if count != 1:
            raise BadTemplate(f"template must contain {{{name}}} exactly once, found {count}")


def format_context(context: Sequence[tuple[LogRecord, float]]) -> str:
    return "\n".join(f"[{r.t:.3f}] [{r.node}] {r.msg}" for r, _ in context)


def render_prompt(template: str, context: Sequence[tuple[LogRecord, float]], question: str) -> str:
    check_template(template)
    fills = {"{context}": format_context(context), "{question}": question}
    # single pass, so braces inside the question or the logs are never re-expanded
    return _PLACEHOLDER.sub(lambda m: fills[m.group(0)], template)


def build_context(store: VectorStore, question: str, k: int, embedder) -> list[tuple[LogRecord, float]]:
    if not len(store):
        raise EmptyStore()
    return [(doc.record, sim) for doc, sim in store.top_k(embedder.embed(question), k)]


def complete(prompt: str, context: Sequence[tuple[LogRecord, float]], cfg: LLMConfig) -> str:
    if cfg.mode is BackendMode.FAKE:
        return FAKE_ANSWER_PREFIX + format_context(context)
    url = cfg.endpoint_url.rstrip("/") + "/v1/chat/completions"
    body = _http.post_json(
        url, {"model": cfg.model_name, "messages": [{"role": "user", "content": prompt}]}, cfg.timeout
    )
    try:
        text = body["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError):
        raise BackendError(f"{url} reply is not a chat completion") from None
    if not isinstance(text, str):
        raise BackendError(f"{url} returned non-text content")
    return text


def answer(question: str, store: VectorStore, cfg: RagConfig, embedder) -> ExplanationResult:
    context = build_context(store, question, cfg.k, embedder)
    prompt = render_prompt(cfg.template, context, question)
    text = complete(prompt, context, cfg.llm)
    if not text.strip():
        raise EmptyAnswer("language model returned an empty answer")
    return ExplanationResult(text, context, prompt)
