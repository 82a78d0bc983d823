"""HTTP ask-service.

``GET /health`` answers ``{"status": "ok"}``. ``POST /ask`` takes
``{"question": str, "k": int?}`` and returns the same object ``xar ask``
prints. Status codes: 400 bad request, 409 empty knowledge base, 502 backend
failure.
"""

from __future__ import annotations

import json
import logging
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .config import AppConfig
from .embedder import make_embedder
from .errors import BackendError, EmptyStore
from .pipeline import ask
from .vector_store import ReadWriteLock, VectorStore

log = logging.getLogger(__name__)

MAX_BODY = 1 << 20


class AskServer(ThreadingHTTPServer):
    daemon_threads = False
    block_on_close = True

    def __init__(self, address, store: VectorStore, cfg: AppConfig):
        self.store = store
        self.cfg = cfg
        self.lock = ReadWriteLock()
        self.embedder = make_embedder(cfg.embed_config())
        super().__init__(address, AskHandler)

    def replace_store(self, store: VectorStore) -> None:
        with self.lock.write():
            self.store = store


class _BadRequest(Exception):
    pass


class AskHandler(BaseHTTPRequestHandler):
    server: AskServer
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):
        log.debug("%s - %s", self.address_string(), format % args)

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/health":
            self._send(HTTPStatus.OK, {"status": "ok"})
        else:
            self._send(HTTPStatus.NOT_FOUND, {"error": "not found"})

    def do_POST(self):
        if self.path != "/ask":
            self._send(HTTPStatus.NOT_FOUND, {"error": "not found"})
            return
        try:
            question, k = self._read_request()
        except _BadRequest as exc:
            self._send(HTTPStatus.BAD_REQUEST, {"error": str(exc)})
            return
        try:
            with self.server.lock.read():
                result = ask(question, self.server.store, self.server.cfg, k, self.server.embedder)
        except EmptyStore as exc:
            self._send(HTTPStatus.CONFLICT, {"error": str(exc)})
        except BackendError as exc:
            self._send(HTTPStatus.BAD_GATEWAY, {"error": str(exc)})
        except Exception as exc:  # noqa: BLE001
            log.exception("ask failed")
            self._send(HTTPStatus.INTERNAL_SERVER_ERROR, {"error": str(exc)})
        else:
            self._send(HTTPStatus.OK, result.to_dict())

    def _read_request(self):
        try:
            length = int(self.headers.get("Content-Length", 0))
        except ValueError:
            raise _BadRequest("bad Content-Length") from None
        if length <= 0 or length > MAX_BODY:
            raise _BadRequest("request body required")
        try:
            body = json.loads(self.rfile.read(length).decode("utf-8"))
        except (UnicodeDecodeError, ValueError):
            raise _BadRequest("body is not valid JSON") from None
        if not isinstance(body, dict):
            raise _BadRequest("body must be a JSON object")
        question = body.get("question")
        if not isinstance(question, str) or not question.strip():
            raise _BadRequest("'question' must be a non-empty string")
        k = body.get("k")
        if k is not None and (isinstance(k, bool) or not isinstance(k, int) or k < 1):
            raise _BadRequest("'k' must be a positive integer")
        unknown = set(body) - {"question", "k"}
        if unknown:
            raise _BadRequest(f"unexpected keys {sorted(unknown)}")
        return question, k


def make_server(store: VectorStore, cfg: AppConfig, host: str | None = None, port: int | None = None) -> AskServer:
    return AskServer((host or cfg.host, cfg.port if port is None else port), store, cfg)
