"""Scripted stand-in for a chat-completions endpoint.

The fixture maps request_hash -> canned response text, so a test declares
exactly which requests it expects and what the model supposedly said.
A fixture entry may also be ``{"response": ..., "fail": N}`` to serve N
retryable 500s before succeeding, for exercising the backoff path.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Iterable, Mapping

from .client import ChatRequest, request_hash


def build_fixture(entries: Iterable[tuple[ChatRequest, str]]) -> dict[str, str]:
    """Fixture map from (request, response) pairs."""
    return {request_hash(request): response for request, response in entries}


class MockChatServer:
    """Local HTTP server answering only requests present in the fixture."""

    def __init__(
        self,
        fixture: Mapping[str, object],
        *,
        require_auth: str | None = None,
        delay: float = 0.0,
    ) -> None:
        self.fixture = dict(fixture)
        self.require_auth = require_auth
        # Seconds to sleep per request; lets tests interrupt a slow run.
        self.delay = delay
        self.served: list[str] = []
        self.unknown: list[str] = []
        self._fail_budget: dict[str, int] = {}
        for key, value in self.fixture.items():
            if isinstance(value, Mapping):
                self._fail_budget[key] = int(value.get("fail", 0))
        self._lock = threading.Lock()
        self._server: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        assert self._server is not None, "server not started"
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockChatServer":
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args) -> None:
                pass

            def do_POST(self) -> None:
                if outer.delay:
                    time.sleep(outer.delay)
                if outer.require_auth is not None:
                    token = self.headers.get("Authorization", "")
                    if token != f"Bearer {outer.require_auth}":
                        self._reply(401, {"error": "bad credentials"})
                        return
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length))
                messages = body.get("messages", [])
                system = next(
                    (m["content"] for m in messages if m.get("role") == "system"), ""
                )
                user = next(
                    (m["content"] for m in messages if m.get("role") == "user"), ""
                )
                key = request_hash(
                    ChatRequest(
                        model=body.get("model", ""),
                        system_prompt=system,
                        user_content=user,
                        temperature=body.get("temperature", 0.0),
                    )
                )
                with outer._lock:
                    value = outer.fixture.get(key)
                    if value is None:
                        outer.unknown.append(key)
                        self._reply(404, {"error": f"no fixture for {key}"})
                        return
                    if outer._fail_budget.get(key, 0) > 0:
                        outer._fail_budget[key] -= 1
                        self._reply(500, {"error": "scripted failure"})
                        return
                    outer.served.append(key)
                text = value["response"] if isinstance(value, Mapping) else value
                self._reply(
                    200, {"choices": [{"message": {"content": text}}]}
                )

            def _reply(self, status: int, payload: dict) -> None:
                data = json.dumps(payload).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
            self._server = None
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

    def __enter__(self) -> "MockChatServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()
