"""Text embeddings: a deterministic feature-hashing fake and an HTTP client."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import _http
from .errors import BackendDimensionMismatch, BackendError, DimensionMismatch

FNV64_OFFSET = 14695981039346656037
FNV64_PRIME = 1099511628211
FAKE_DIM = 64

Embedding = tuple[float, ...]


class BackendMode(str, enum.Enum):
    FAKE = "fake"
    HTTP = "http"

    @classmethod
    def parse(cls, value) -> "BackendMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"backend mode must be 'fake' or 'http', got {value!r}") from None


def fnv1a_64(data: bytes) -> int:
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def tokenize(text: str) -> list[str]:
    """Lowercase and split on every non-alphanumeric character."""
    tokens = []
    current = []
    for ch in text.lower():
        if ch.isalnum():
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def normalize(values: Sequence[float]) -> Embedding:
    norm = math.sqrt(math.fsum(v * v for v in values))
    if norm == 0:
        return tuple(0.0 for _ in values)
    return tuple(v / norm for v in values)


def hash_embed(text: str, dim: int = FAKE_DIM) -> Embedding:
    """Signed feature hashing of the bag of tokens.

    Each token lands in bucket ``h % dim`` with sign taken from bit 6 of its
    FNV-1a hash. The result is L2-normalized, or all zeros for no tokens.
    """
    acc = [0.0] * dim
    for token in tokenize(text):
        h = fnv1a_64(token.encode("utf-8"))
        acc[h % dim] += -1.0 if (h >> 6) & 1 else 1.0
    return normalize(acc)


def cosine_similarity(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimensionMismatch(len(a), len(b))
    norm_a = math.sqrt(math.fsum(x * x for x in a))
    norm_b = math.sqrt(math.fsum(x * x for x in b))
    if norm_a == 0 or norm_b == 0:
        return 0.0
    sim = math.fsum(x * y for x, y in zip(a, b)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, sim))


@dataclass(frozen=True)
class EmbedConfig:
    mode: BackendMode = BackendMode.FAKE
    endpoint_url: Optional[str] = None
    timeout: float = 30.0

    def __post_init__(self):
        object.__setattr__(self, "mode", BackendMode.parse(self.mode))
        if self.mode is BackendMode.HTTP and not self.endpoint_url:
            raise ValueError("HTTP embedding backend requires endpoint_url")


class FakeEmbedder:
    dimension = FAKE_DIM

    def embed(self, text: str) -> Embedding:
        return hash_embed(text, self.dimension)


class HttpEmbedder:
    """Client for ``POST {url}/embed``. The dimension is fixed by the first reply."""

    def __init__(self, endpoint_url: str, timeout: float = 30.0):
        self.url = endpoint_url.rstrip("/") + "/embed"
        self.timeout = timeout
        self.dimension: Optional[int] = None

    def embed(self, text: str) -> Embedding:
        body = _http.post_json(self.url, {"input": text}, self.timeout)
        values = body.get("embedding") if isinstance(body, dict) else None
        if not isinstance(values, list) or not values:
            raise BackendError(f"{self.url} returned no embedding")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in values):
            raise BackendError(f"{self.url} returned non-finite or non-numeric values")
        if self.dimension is None:
            self.dimension = len(values)
        elif len(values) != self.dimension:
            raise BackendDimensionMismatch(self.dimension, len(values))
        return normalize([float(v) for v in values])


def make_embedder(cfg: EmbedConfig):
    if cfg.mode is BackendMode.HTTP:
        return HttpEmbedder(cfg.endpoint_url, cfg.timeout)
    return FakeEmbedder()


def embed(text: str, cfg: Optional[EmbedConfig] = None) -> Embedding:
    return make_embedder(cfg or EmbedConfig()).embed(text)
