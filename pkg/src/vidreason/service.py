"""Human-annotation HTTP service with crash-safe session resumption.

Sessions persist as append-only JSON lines (one header line, then one line
per score) with flushed+fsynced writes, so an interrupted service resumes
exactly at the first unscored item. Exported scores reuse the Judgment
schema and feed the stats module unchanged.

HTTP API (JSON unless noted):
    POST /api/sessions                 {annotator_id} -> session summary (creates or resumes)
    GET  /api/sessions/<sid>/next      next unscored item, or {"done": true}
    POST /api/sessions/<sid>/scores    {index, score, note?} -> {cursor}
    GET  /api/sessions/<sid>/progress  {cursor, total, scored: [...]}
    GET  /media/<model>/<task_id>/<kind>   kind: first_frame | final_frame | video | last_frame
    GET  /api/run                      run metadata
    GET  /api/export                   all human scores as JSON lines
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .judge import extract_frames, make_judgment
from .pipeline.runner import load_manifest
from .raster import encode_png
from .rng import Rng, _fnv1a64
from .task import FINAL_FRAME, FIRST_FRAME, PROMPT


class ServiceError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


_SAFE_ID = re.compile(r"[^A-Za-z0-9_.-]")


def _sanitize(name: str) -> str:
    return _SAFE_ID.sub("_", name)[:80]


class _Session:
    def __init__(self, session_id: str, annotator_id: str, run_id: str, item_order: list[int], path: Path):
        self.session_id = session_id
        self.annotator_id = annotator_id
        self.run_id = run_id
        self.item_order = item_order
        self.path = path
        self.scores: list[dict] = []  # scores[i] belongs to item_order[i]
        self.lock = threading.Lock()

    @property
    def cursor(self) -> int:
        return len(self.scores)

    @property
    def total(self) -> int:
        return len(self.item_order)

    def summary(self) -> dict:
        return {
            "session_id": self.session_id,
            "annotator_id": self.annotator_id,
            "run_id": self.run_id,
            "cursor": self.cursor,
            "total": self.total,
        }


class AnnotationStore:
    """Sessions, persistence, and media lookups over one run manifest."""

    def __init__(self, run_root: Path | str, tasks_root: Path | str | None = None, reveal_final: bool = False):
        self.run_root = Path(run_root)
        self.manifest = load_manifest(self.run_root)
        self.run_id = self.manifest["run_id"]
        self.tasks_root = Path(tasks_root) if tasks_root else Path(self.manifest["task_root"])
        self.reveal_final = reveal_final
        self.items = [(r["model_name"], r["task_id"]) for r in self.manifest["results"]]
        self.sessions_dir = self.run_root / "annotations"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    # -- sessions -----------------------------------------------------------

    def _session_id(self, annotator_id: str) -> str:
        return hashlib.sha256(f"{annotator_id}|{self.run_id}".encode()).hexdigest()[:16]

    def _session_path(self, annotator_id: str) -> Path:
        return self.sessions_dir / f"{_sanitize(annotator_id)}__{self.run_id}.jsonl"

    def create_session(self, annotator_id: str) -> _Session:
        """Create a session, or resume the stored one for this annotator."""
        if not annotator_id or not annotator_id.strip():
            raise ServiceError(422, "annotator_id must be non-empty")
        annotator_id = annotator_id.strip()
        sid = self._session_id(annotator_id)
        with self._lock:
            if sid in self._sessions:
                return self._sessions[sid]
            path = self._session_path(annotator_id)
            if path.is_file():
                session = self._load_session(path, sid, annotator_id)
            else:
                order = list(range(len(self.items)))
                Rng(_fnv1a64(f"{annotator_id}|{self.run_id}".encode()), "annotation-order").shuffle(order)
                session = _Session(sid, annotator_id, self.run_id, order, path)
                header = {
                    "session_id": sid,
                    "annotator_id": annotator_id,
                    "run_id": self.run_id,
                    "item_order": order,
                }
                self._append_line(session, header)
            self._sessions[sid] = session
            return session

    def _load_session(self, path: Path, sid: str, annotator_id: str) -> _Session:
        lines = path.read_text(encoding="utf-8").splitlines()
        records = []
        for i, line in enumerate(lines):
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    break  # torn final write from a crash; drop it
                raise ServiceError(500, f"corrupt session file {path} at line {i + 1}")
        if not records:
            raise ServiceError(500, f"empty session file {path}")
        header = records[0]
        order = header["item_order"]
        if sorted(order) != list(range(len(self.items))):
            raise ServiceError(500, f"session {path} does not match the run manifest")
        session = _Session(sid, annotator_id, header["run_id"], order, path)
        for pos, rec in enumerate(records[1:]):
            if rec.get("index") != pos:
                break  # anything after a gap is unreachable prefix-wise
            session.scores.append(rec)
        return session

    def _append_line(self, session: _Session, record: dict) -> None:
        line = json.dumps(record, sort_keys=True) + "\n"
        with open(session.path, "a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())

    def get_session(self, session_id: str) -> _Session:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                # after a restart the registry is empty; fall back to disk
                for path in sorted(self.sessions_dir.glob("*.jsonl")):
                    header = self._read_header(path)
                    if header and header.get("session_id") == session_id:
                        session = self._load_session(path, session_id, header["annotator_id"])
                        self._sessions[session_id] = session
                        break
        if session is None:
            raise ServiceError(404, f"unknown session {session_id!r}")
        return session

    @staticmethod
    def _read_header(path: Path) -> dict | None:
        with open(path, encoding="utf-8") as fh:
            first = fh.readline()
        try:
            return json.loads(first)
        except json.JSONDecodeError:
            return None

    # -- protocol operations --------------------------------------------------

    def next_item(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        with session.lock:
            if session.cursor >= session.total:
                return {"done": True, "cursor": session.cursor, "total": session.total}
            item_idx = session.item_order[session.cursor]
            model, task_id = self.items[item_idx]
            prompt = (self.tasks_root / task_id / PROMPT).read_text(encoding="utf-8")
            doc = {
                "done": False,
                "index": session.cursor,
                "total": session.total,
                "model": model,
                "task_id": task_id,
                "prompt": prompt,
                "first_frame_url": f"/media/{model}/{task_id}/first_frame",
                "video_url": f"/media/{model}/{task_id}/video",
            }
            if self.reveal_final:
                doc["expected_final_url"] = f"/media/{model}/{task_id}/final_frame"
            return doc

    def submit_score(self, session_id: str, index: int, score: int, note: str = "") -> dict:
        session = self.get_session(session_id)
        if not isinstance(score, int) or not 1 <= score <= 5:
            raise ServiceError(422, f"score must be an integer 1-5, got {score!r}")
        with session.lock:
            if index < session.cursor:
                raise ServiceError(409, f"item {index} was already scored")
            if index != session.cursor:
                raise ServiceError(422, f"next scorable item is {session.cursor}, not {index}")
            if index >= session.total:
                raise ServiceError(422, "session is already complete")
            item_idx = session.item_order[index]
            model, task_id = self.items[item_idx]
            record = {
                "index": index,
                "model_name": model,
                "task_id": task_id,
                "score": score,
                "note": note or "",
                "ts": time.time(),
            }
            self._append_line(session, record)
            session.scores.append(record)
            return {"cursor": session.cursor, "total": session.total}

    def progress(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        with session.lock:
            return {
                "session_id": session.session_id,
                "annotator_id": session.annotator_id,
                "cursor": session.cursor,
                "total": session.total,
                "scored": [
                    {"index": r["index"], "model": r["model_name"], "task_id": r["task_id"], "score": r["score"]}
                    for r in session.scores
                ],
            }

    # -- media ----------------------------------------------------------------

    def media(self, model: str, task_id: str, kind: str) -> tuple[bytes, str]:
        if (model, task_id) not in set(self.items):
            raise ServiceError(404, f"unknown item {model}/{task_id}")
        task_dir = self.tasks_root / task_id
        if kind == "first_frame":
            return (task_dir / FIRST_FRAME).read_bytes(), "image/png"
        if kind == "final_frame":
            if not self.reveal_final:
                raise ServiceError(403, "expected final frames are withheld from annotators")
            return (task_dir / FINAL_FRAME).read_bytes(), "image/png"
        video = self._video_path(model, task_id)
        if kind == "video":
            mime = "video/mp4" if video.suffix == ".mp4" else "video/x-msvideo"
            return video.read_bytes(), mime
        if kind == "last_frame":
            _, _, last = extract_frames(video)
            return encode_png(last), "image/png"
        raise ServiceError(404, f"unknown media kind {kind!r}")

    def _video_path(self, model: str, task_id: str) -> Path:
        for rec in self.manifest["results"]:
            if rec["model_name"] == model and rec["task_id"] == task_id:
                if rec.get("video_path") and Path(rec["video_path"]).is_file():
                    return Path(rec["video_path"])
                raise ServiceError(404, f"no video for {model}/{task_id} (status {rec['status']})")
        raise ServiceError(404, f"unknown item {model}/{task_id}")

    # -- export ---------------------------------------------------------------

    def export_human_scores(self) -> str:
        """All stored scores as Judgment JSON lines (stats reads these as-is)."""
        lines = []
        for path in sorted(self.sessions_dir.glob("*.jsonl")):
            raw = path.read_text(encoding="utf-8").splitlines()
            records = []
            for i, line in enumerate(raw):
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError:
                    if i == len(raw) - 1:
                        break  # torn trailing write
                    raise ServiceError(500, f"corrupt session file {path} at line {i + 1}")
            if not records:
                continue
            annotator = records[0]["annotator_id"]
            for pos, rec in enumerate(records[1:]):
                if rec.get("index") != pos:
                    break
                j = make_judgment(
                    rec["task_id"], rec["model_name"], f"human:{annotator}", rec["score"], rec.get("note", "")
                )
                lines.append(json.dumps(j.as_dict(), sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")


# -- HTTP layer ----------------------------------------------------------------


class AnnotationService:
    """ThreadingHTTPServer wrapper around an AnnotationStore; optionally
    serves a static UI directory at /."""

    def __init__(self, store: AnnotationStore, port: int = 0, ui_dir: Path | str | None = None):
        self.store = store
        self.ui_dir = Path(ui_dir) if ui_dir else None
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send(self, status: int, body: bytes, content_type: str):
                self.send_response(status)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(body)))
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.end_headers()
                self.wfile.write(body)

            def _json(self, status: int, doc: dict):
                self._send(status, json.dumps(doc).encode(), "application/json")

            def do_OPTIONS(self):
                self._send(204, b"", "text/plain")

            def do_POST(self):
                try:
                    length = int(self.headers.get("Content-Length", "0"))
                    try:
                        body = json.loads(self.rfile.read(length) or b"{}")
                    except json.JSONDecodeError:
                        raise ServiceError(400, "request body is not valid JSON")
                    if self.path == "/api/sessions":
                        session = service.store.create_session(body.get("annotator_id", ""))
                        self._json(200, session.summary())
                        return
                    m = re.fullmatch(r"/api/sessions/([0-9a-f]+)/scores", self.path)
                    if m:
                        if "index" not in body or "score" not in body:
                            raise ServiceError(422, "score submission needs 'index' and 'score'")
                        result = service.store.submit_score(
                            m.group(1), body["index"], body["score"], body.get("note", "")
                        )
                        self._json(200, result)
                        return
                    raise ServiceError(404, f"no POST route {self.path}")
                except ServiceError as e:
                    self._json(e.status, {"error": str(e)})

            def do_GET(self):
                try:
                    m = re.fullmatch(r"/api/sessions/([0-9a-f]+)/next", self.path)
                    if m:
                        self._json(200, service.store.next_item(m.group(1)))
                        return
                    m = re.fullmatch(r"/api/sessions/([0-9a-f]+)/progress", self.path)
                    if m:
                        self._json(200, service.store.progress(m.group(1)))
                        return
                    if self.path == "/api/run":
                        self._json(
                            200,
                            {
                                "run_id": service.store.run_id,
                                "total_items": len(service.store.items),
                                "models": service.store.manifest["models"],
                                "reveal_final": service.store.reveal_final,
                            },
                        )
                        return
                    if self.path == "/api/export":
                        self._send(200, service.store.export_human_scores().encode(), "application/jsonl")
                        return
                    m = re.fullmatch(r"/media/([^/]+)/([^/]+)/([a-z_]+)", self.path)
                    if m:
                        body, mime = service.store.media(m.group(1), m.group(2), m.group(3))
                        self._send(200, body, mime)
                        return
                    if service.ui_dir is not None:
                        self._static(self.path)
                        return
                    raise ServiceError(404, f"no GET route {self.path}")
                except ServiceError as e:
                    self._json(e.status, {"error": str(e)})

            def _static(self, path: str):
                rel = "index.html" if path in ("/", "") else path.lstrip("/")
                full = (service.ui_dir / rel).resolve()
                if not str(full).startswith(str(service.ui_dir.resolve())) or not full.is_file():
                    raise ServiceError(404, f"no file {rel}")
                mime = {
                    ".html": "text/html",
                    ".js": "text/javascript",
                    ".css": "text/css",
                    ".png": "image/png",
                    ".svg": "image/svg+xml",
                    ".map": "application/json",
                }.get(full.suffix, "application/octet-stream")
                self._send(200, full.read_bytes(), mime)

        self._server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self) -> str:
        self._thread.start()
        return self.url

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
