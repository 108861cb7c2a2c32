"""HTTP front for the survey service.

Endpoints:
    POST /session {"rater_id"}                     -> {"session_id"}
    GET  /session/<id>/next                        -> item payload or {"done": true}
    POST /session/<id>/rating {text_id, quality, naturalness}
    GET  /admin/progress                           -> per-text judgement counts
    GET  /admin/export                             -> judgement CSV

Responses carry permissive CORS headers so a browser frontend served from
anywhere (including file://) can talk to the service; an optional ui_dir
is served under /app/ to avoid cross-origin setups entirely.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .survey import (
    CapExceeded, DuplicateRating, NotServed, SurveyService, UnknownSession,
)

_SESSION_NEXT = re.compile(r"^/session/([0-9a-f]+)/next$")
_SESSION_RATING = re.compile(r"^/session/([0-9a-f]+)/rating$")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
}


def _error_status(exc) -> tuple[int, str]:
    if isinstance(exc, UnknownSession):
        return 404, "UnknownSession"
    if isinstance(exc, NotServed):
        return 403, "NotServed"
    if isinstance(exc, DuplicateRating):
        return 409, "DuplicateRating"
    if isinstance(exc, CapExceeded):
        return 409, "CapExceeded"
    return 400, "BadRequest"


class _Handler(BaseHTTPRequestHandler):
    service: SurveyService = None
    ui_dir: Path | None = None

    def _send(self, status: int, body: bytes, content_type="application/json"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, payload: dict):
        self._send(status, json.dumps(payload).encode("utf-8"))

    def _send_error_json(self, exc):
        status, code = _error_status(exc)
        self._send_json(status, {"error": code, "message": str(exc)})

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b"{}"
        return json.loads(raw.decode("utf-8"))

    def do_OPTIONS(self):
        self._send(204, b"")

    def do_POST(self):
        try:
            if self.path == "/session":
                body = self._read_json()
                session = self.service.open_session(str(body.get("rater_id", "")))
                self._send_json(200, {"session_id": session.session_id,
                                      "package_id": session.package_id})
                return
            if match := _SESSION_RATING.match(self.path):
                body = self._read_json()
                sequence = self.service.submit_rating(
                    match.group(1), body.get("text_id", ""),
                    body.get("quality", ""), body.get("naturalness", ""))
                self._send_json(200, {"ok": True, "sequence_index": sequence})
                return
            self._send_json(404, {"error": "NotFound", "message": self.path})
        except Exception as exc:  # surfaced as a structured error payload
            self._send_error_json(exc)

    def do_GET(self):
        try:
            if match := _SESSION_NEXT.match(self.path):
                session_id = match.group(1)
                item = self.service.next_item(session_id)
                progress = self.service.progress(session_id)
                if item is None:
                    self._send_json(200, {"done": True, "progress": progress})
                else:
                    self._send_json(200, {"done": False, "item": item.payload(),
                                          "progress": progress})
                return
            if self.path == "/admin/progress":
                self._send_json(200, {"texts": self.service.text_progress()})
                return
            if self.path == "/admin/export":
                body = self.service.export_judgements().encode("utf-8")
                self._send(200, body, content_type="text/csv; charset=utf-8")
                return
            if self.ui_dir and (self.path == "/" or self.path.startswith("/app")):
                self._serve_static()
                return
            self._send_json(404, {"error": "NotFound", "message": self.path})
        except Exception as exc:
            self._send_error_json(exc)

    def _serve_static(self):
        rel = self.path[len("/app"):] if self.path.startswith("/app") else self.path
        rel = rel.lstrip("/") or "index.html"
        target = (self.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": "NotFound", "message": self.path})
            return
        body = target.read_bytes()
        self._send(200, body, content_type=_CONTENT_TYPES.get(target.suffix, "application/octet-stream"))

    def log_message(self, *args):
        pass


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128  # survive bursts of concurrent raters


class SurveyServer:
    def __init__(self, service: SurveyService, port: int = 0, ui_dir=None):
        handler = type("Handler", (_Handler,), {
            "service": service,
            "ui_dir": Path(ui_dir) if ui_dir else None,
        })
        self.httpd = _Server(("127.0.0.1", port), handler)
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self):
        self._thread.start()
        return self

    def stop(self):
        self.httpd.shutdown()
        self.httpd.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def serve_forever(self):
        self.httpd.serve_forever()
