import json
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from xar import scenario
from xar.session import write_session

QUESTION = (
    "Pay attention to camera logs. Did the robot encounter any obstacles during navigation? "
    "What type of obstacle?"
)

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


class FakeBackend:
    """Scriptable stand-in for the embed / caption / chat endpoints."""

    def __init__(self):
        self.requests = []
        self.status = 200
        self.delay = 0.0
        self.embedding = [3.0, 4.0]
        self.caption = "a person's hand with blue and white stripes"
        self.completion = "The robot met a person."
        self.override = None  # raw JSON body to return instead

    def reply(self, path, body):
        if self.override is not None:
            return self.override
        if path == "/embed":
            emb = self.embedding(body["input"]) if callable(self.embedding) else self.embedding
            return {"embedding": emb}
        if path == "/caption":
            return {"caption": self.caption}
        if path == "/v1/chat/completions":
            return {"choices": [{"message": {"role": "assistant", "content": self.completion}}]}
        return None


@pytest.fixture
def fake_backend():
    backend = FakeBackend()

    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            backend.requests.append((self.path, body))
            if backend.delay:
                time.sleep(backend.delay)
            payload = backend.reply(self.path, body)
            status = backend.status if payload is not None else 404
            data = json.dumps(payload).encode()
            try:
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)
            except (BrokenPipeError, ConnectionResetError):
                pass  # client already gave up (timeout tests)

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    backend.url = f"http://127.0.0.1:{server.server_address[1]}"
    yield backend
    server.shutdown()
    server.server_close()


@pytest.fixture
def dead_url():
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return f"http://127.0.0.1:{port}"


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.jsonl"
    path.write_bytes(write_session(scenario.generate()))
    return path
