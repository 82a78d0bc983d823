"""Exact cosine-similarity knowledge base with JSON persistence."""

from __future__ import annotations

import json
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional, Sequence

from .embedder import Embedding, cosine_similarity, fnv1a_64
from .errors import CorruptStoreFile, DimensionMismatch, EmptyStore, VersionMismatch
from .session import Level, LogRecord

FORMAT_VERSION = 1
INSERTED = "inserted"
DUPLICATE = "duplicate"


def doc_id_for(record: LogRecord) -> int:
    return fnv1a_64(f"{record.t:.6f}|{record.node}|{record.msg}".encode("utf-8"))


@dataclass(frozen=True)
class EmbeddedDocument:
    doc_id: int
    record: LogRecord
    vector: Embedding


class VectorStore:
    """Insertion-ordered documents, unique by ``doc_id``.

    ``dimension`` is None until the first insert unless given up front.
    """

    def __init__(self, dimension: Optional[int] = None):
        if dimension is not None and dimension <= 0:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self._docs: dict[int, EmbeddedDocument] = {}

    def __len__(self):
        return len(self._docs)

    def __eq__(self, other):
        if not isinstance(other, VectorStore):
            return NotImplemented
        return self.dimension == other.dimension and list(self._docs.values()) == list(other._docs.values())

    @property
    def documents(self) -> list[EmbeddedDocument]:
        return list(self._docs.values())

    def add_document(self, record: LogRecord, vector: Sequence[float]) -> str:
        if self.dimension is not None and len(vector) != self.dimension:
            raise DimensionMismatch(self.dimension, len(vector))
        doc_id = doc_id_for(record)
        if doc_id in self._docs:
            return DUPLICATE
        if self.dimension is None:
            self.dimension = len(vector)
        self._docs[doc_id] = EmbeddedDocument(doc_id, record, tuple(float(v) for v in vector))
        return INSERTED

    def top_k(self, query: Sequence[float], k: int) -> list[tuple[EmbeddedDocument, float]]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if not self._docs:
            raise EmptyStore()
        if len(query) != self.dimension:
            raise DimensionMismatch(self.dimension, len(query))
        scored = [(doc, cosine_similarity(query, doc.vector)) for doc in self._docs.values()]
        scored.sort(key=lambda pair: (-pair[1], pair[0].doc_id))
        return scored[:k]

    # -- persistence -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "dimension": self.dimension,
            "documents": [
                {
                    "doc_id": doc.doc_id,
                    "record": {
                        "t": doc.record.t,
                        "level": doc.record.level.name,
                        "node": doc.record.node,
                        "msg": doc.record.msg,
                    },
                    "vector": list(doc.vector),
                }
                for doc in self._docs.values()
            ],
        }

    def save(self) -> bytes:
        text = json.dumps(self.to_json(), ensure_ascii=False, separators=(",", ":"), allow_nan=False)
        return (text + "\n").encode("utf-8")

    @classmethod
    def load(cls, data: bytes) -> "VectorStore":
        try:
            obj = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise CorruptStoreFile(f"not a JSON document: {exc}") from None
        if not isinstance(obj, dict) or "version" not in obj:
            raise CorruptStoreFile("missing header")
        if obj["version"] != FORMAT_VERSION:
            raise VersionMismatch(f"store version {obj['version']!r}, expected {FORMAT_VERSION}")
        try:
            store = cls(obj["dimension"])
            for entry in obj["documents"]:
                rec = entry["record"]
                record = LogRecord(float(rec["t"]), Level.parse(rec["level"]), rec["node"], rec["msg"])
                record.validate()
                vector = entry["vector"]
                if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in vector):
                    raise ValueError("non-finite vector component")
                if doc_id_for(record) != entry["doc_id"]:
                    raise ValueError(f"doc_id {entry['doc_id']} does not match its record")
                if store.add_document(record, vector) == DUPLICATE:
                    raise ValueError(f"duplicate doc_id {entry['doc_id']}")
        except CorruptStoreFile:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptStoreFile(f"bad document entry: {exc}") from None
        return store


class ReadWriteLock:
    """Many readers or one writer. Waiting writers block new readers."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._writers_waiting = 0

    @contextmanager
    def read(self):
        with self._cond:
            while self._writer or self._writers_waiting:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                if not self._readers:
                    self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            self._writers_waiting += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._writers_waiting -= 1
            self._writer = True
        try:
            yield
        finally:
            with self._cond:
                self._writer = False
                self._cond.notify_all()
