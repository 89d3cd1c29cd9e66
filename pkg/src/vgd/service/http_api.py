"""HTTP front end: JSON API over the session store plus console statics.

Endpoints (all JSON unless noted):

    GET  /api/health                        liveness probe
    GET  /api/sessions                      session summaries
    POST /api/sessions                      {"scenario": {...} | "scenario_path": str,
                                             "mode": "INTERACTIVE"|"SCRIPTED",
                                             "speed": float} -> 201 summary
    POST /api/sessions/<id>/start           run the session clock
    POST /api/sessions/<id>/pause           freeze it
    POST /api/sessions/<id>/reset           back to READY with fresh state
    POST /api/sessions/<id>/actions         {"kind": "SHORT_TAP"|"LONG_TAP"|
                                             "WALK_TOGGLE"|"RESET"}
    GET  /api/sessions/<id>/snapshot        latest published snapshot bundle
    GET  /api/sessions/<id>/announcements   ?limit=N, full transcript window
    GET  /api/sessions/<id>/log             event log download (JSONL)

With a console directory configured, anything outside /api serves the
built browser console.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..sim import scenario as sc
from .session import INTERACTIVE, SessionError, SessionStore

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
}


class VgdService:
    """Owns the session store and the HTTP server lifecycle."""

    def __init__(self, store: SessionStore | None = None,
                 console_dir: str | Path | None = None,
                 host: str = "127.0.0.1", port: int = 0):
        self.store = store or SessionStore()
        self.console_dir = Path(console_dir) if console_dir else None
        handler = _make_handler(self.store, self.console_dir)
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start(self) -> "VgdService":
        self._thread = threading.Thread(
            target=self.httpd.serve_forever, name="vgd-http", daemon=True
        )
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def stop(self) -> None:
        self.httpd.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
        self.httpd.server_close()
        self.store.close_all()

    def __enter__(self) -> "VgdService":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


def _make_handler(store: SessionStore, console_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet test output
            pass

        # -- plumbing ------------------------------------------------------

        def _send(self, code: int, body: bytes, content_type: str) -> None:
            self.send_response(code)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _json(self, code: int, doc: dict) -> None:
            self._send(code, json.dumps(doc).encode(), "application/json")

        def _error(self, code: int, message: str) -> None:
            self._json(code, {"error": message})

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            doc = json.loads(raw)
            if not isinstance(doc, dict):
                raise ValueError("request body must be a JSON object")
            return doc

        # -- methods ---------------------------------------------------------

        def do_OPTIONS(self):
            self._send(204, b"", "text/plain")

        def do_GET(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            try:
                if parts[:2] == ["api", "health"]:
                    return self._json(200, {"ok": True})
                if parts[:2] == ["api", "sessions"] and len(parts) == 2:
                    return self._json(200, {"sessions": store.list()})
                if parts[:2] == ["api", "sessions"] and len(parts) == 4:
                    session = store.get(parts[2])
                    if parts[3] == "snapshot":
                        return self._json(200, session.snapshot())
                    if parts[3] == "announcements":
                        qs = parse_qs(url.query)
                        limit = int(qs["limit"][0]) if "limit" in qs else None
                        return self._json(
                            200, {"announcements": session.announcements(limit)}
                        )
                    if parts[3] == "log":
                        return self._send(
                            200, session.event_log_jsonl().encode(),
                            "application/x-ndjson",
                        )
                if not parts or parts[0] != "api":
                    return self._static(url.path)
                return self._error(404, f"no such resource {url.path}")
            except SessionError as e:
                return self._error(404, str(e))
            except (ValueError, KeyError) as e:
                return self._error(400, str(e))

        def do_POST(self):
            url = urlparse(self.path)
            parts = [p for p in url.path.split("/") if p]
            try:
                body = self._body()
            except (ValueError, json.JSONDecodeError) as e:
                return self._error(400, f"bad request body: {e}")
            try:
                if parts == ["api", "sessions"]:
                    return self._create_session(body)
                if parts[:2] == ["api", "sessions"] and len(parts) == 4:
                    session = store.get(parts[2])
                    verb = parts[3]
                    if verb == "start":
                        return self._json(200, {"status": session.start()})
                    if verb == "pause":
                        return self._json(200, {"status": session.pause()})
                    if verb == "reset":
                        return self._json(200, {"status": session.reset()})
                    if verb == "actions":
                        return self._json(200, session.submit_action(body.get("kind", "")))
                return self._error(404, f"no such resource {url.path}")
            except SessionError as e:
                code = 404 if "unknown session" in str(e) else 409
                return self._error(code, str(e))
            except sc.ScenarioError as e:
                return self._error(400, str(e))

        def _create_session(self, body: dict):
            if "scenario" in body:
                scenario = sc.loads(json.dumps(body["scenario"]))
            elif "scenario_path" in body:
                path = Path(body["scenario_path"])
                scenario = sc.load(path)
            else:
                return self._error(400, "body needs 'scenario' or 'scenario_path'")
            session = store.create(
                scenario,
                mode=body.get("mode", INTERACTIVE),
                speed=float(body.get("speed", 1.0)),
            )
            return self._json(201, {"session": session.summary()})

        # -- statics -----------------------------------------------------------

        def _static(self, path: str):
            if console_dir is None:
                return self._error(404, "no console bundled; use the /api endpoints")
            rel = path.lstrip("/") or "index.html"
            target = (console_dir / rel).resolve()
            if not str(target).startswith(str(console_dir.resolve())) or not target.is_file():
                return self._error(404, f"no such file {path}")
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            return self._send(200, target.read_bytes(), ctype)

    return Handler
