"""A local stand-in for an external search engine, used to test the web
adapter contract: JSON hits, error statuses, malformed bodies and
timeouts, with a request counter for retry assertions."""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class StubSearchServer:
    """Behavior is selected per request via the path:

    /search        -> 200 with two hits
    /empty         -> 200 with zero hits
    /error         -> HTTP 500
    /teapot        -> HTTP 418 (non-retryable)
    /malformed     -> 200 with a truncated JSON body
    /not-a-shape   -> 200 with valid JSON of the wrong shape
    /slow          -> sleeps 0.5 s before a valid answer
    """

    def __init__(self):
        self.requests: list[str] = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt, *args):
                pass

            def do_GET(self):
                try:
                    self._respond()
                except (BrokenPipeError, ConnectionResetError):
                    pass  # client gave up (timeout tests)

            def _respond(self):
                outer.requests.append(self.path)
                route = self.path.split("?", 1)[0]
                if route == "/error":
                    self.send_response(500)
                    self.end_headers()
                    return
                if route == "/teapot":
                    self.send_response(418)
                    self.end_headers()
                    return
                if route == "/malformed":
                    body = b'{"results": [ {"url": "http://a"'
                elif route == "/not-a-shape":
                    body = json.dumps({"items": []}).encode()
                elif route == "/empty":
                    body = json.dumps({"results": []}).encode()
                else:
                    if route == "/slow":
                        time.sleep(0.5)
                    body = json.dumps({
                        "results": [
                            {"url": "http://example.org/a", "title": "A", "snippet": "first hit"},
                            {"url": "http://example.org/b", "title": "B", "snippet": "second hit"},
                        ]
                    }).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.port = self.server.server_address[1]
        self._thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    def __enter__(self) -> "StubSearchServer":
        self._thread.start()
        return self

    def __exit__(self, *exc_info):
        self.server.shutdown()
        self.server.server_close()

    def url(self, route: str = "/search") -> str:
        return f"http://127.0.0.1:{self.port}{route}?q={{query}}&k={{k}}"
