"""Deterministic mock video-generation backend.

mock_generate builds a short AVI whose first frame is the task's first
frame and whose last frame depends on the mode:

    oracle  the ground-truth final frame (a "perfect" model)
    lazy    the first frame again (a model that does nothing)
    noisy   the final frame plus seeded per-pixel noise

The same behavior is exposed over HTTP by MockBackendServer, which speaks
the generic job protocol and can inject poll delays and failures.
"""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from ..rng import Rng
from ..task import TaskUnit
from .avi import write_avi
from .preprocess import decode_image_payload

MODES = ("oracle", "lazy", "noisy")
N_FRAMES = 5
NOISE_AMPLITUDE = 4


def _parse_multipart(raw: bytes, content_type: str) -> dict:
    """Decode a multipart /jobs submission into the JSON-body shape."""
    import email.parser
    import email.policy

    header = f"Content-Type: {content_type}\r\nMIME-Version: 1.0\r\n\r\n".encode()
    msg = email.parser.BytesParser(policy=email.policy.default).parsebytes(header + raw)
    if not msg.is_multipart():
        raise ValueError("not a multipart body")
    req = None
    image = None
    for part in msg.iter_parts():
        name = part.get_param("name", header="content-disposition")
        if name == "request":
            req = json.loads(part.get_content())
        elif name == "image":
            image = {"mime": part.get_content_type(), "data": part.get_payload(decode=True)}
    if req is None or image is None:
        raise ValueError("multipart body must carry 'request' and 'image' parts")
    req["image"] = image
    return req


def _crossfade(a: np.ndarray, b: np.ndarray, k: int, n: int) -> np.ndarray:
    return ((a.astype(np.uint16) * (n - k) + b.astype(np.uint16) * k + n // 2) // n).astype(np.uint8)


def _noisy(frame: np.ndarray, seed: int, amplitude: int) -> np.ndarray:
    if amplitude == 0:
        return frame.copy()
    gen = np.random.Generator(np.random.PCG64(seed))
    noise = gen.integers(-amplitude, amplitude + 1, size=frame.shape, dtype=np.int16)
    return np.clip(frame.astype(np.int16) + noise, 0, 255).astype(np.uint8)


def mock_frames(task: TaskUnit, mode: str, amplitude: int = NOISE_AMPLITUDE) -> list[np.ndarray]:
    if mode not in MODES:
        raise ValueError(f"unknown mock mode {mode!r}; expected one of {MODES}")
    first = task.first_frame.px
    if mode == "oracle":
        last = task.final_frame.px.copy()
    elif mode == "lazy":
        last = first.copy()
    else:
        last = _noisy(task.final_frame.px, Rng(task.seed, "mock-noise", task.id).u64() % 2**63, amplitude)
    frames = [first.copy()]
    for k in range(1, N_FRAMES - 1):
        frames.append(_crossfade(first, last, k, N_FRAMES - 1))
    frames.append(last)
    return frames


def mock_generate(task: TaskUnit, mode: str, amplitude: int = NOISE_AMPLITUDE) -> bytes:
    """AVI bytes for the requested mock behavior (1 fps, 9 frames)."""
    return write_avi(mock_frames(task, mode, amplitude), fps=1)


class MockBackendServer:
    """In-process HTTP server speaking the generic video-generation job
    protocol, backed by mock_generate. Used to exercise the real network
    client path hermetically.

    status_delay_polls: number of status polls that report "running" before
    a job turns terminal. fail_jobs: every request whose prompt contains
    the token "FAIL" finishes failed.
    """

    def __init__(self, task_lookup, mode: str = "oracle", status_delay_polls: int = 0):
        self.task_lookup = task_lookup  # task_id -> TaskUnit
        self.mode = mode
        self.status_delay_polls = status_delay_polls
        self.jobs: dict[str, dict] = {}
        self.poll_counts: dict[str, int] = {}
        self._lock = threading.Lock()
        self._next_id = 0
        backend = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # keep tests quiet
                pass

            def _reply(self, code: int, payload: dict | bytes, content_type="application/json"):
                body = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
                self.send_response(code)
                self.send_header("Content-Type", content_type)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_POST(self):
                if self.path != "/jobs":
                    self._reply(404, {"error": "not found"})
                    return
                length = int(self.headers.get("Content-Length", "0"))
                raw = self.rfile.read(length)
                ctype = self.headers.get("Content-Type", "")
                try:
                    if ctype.startswith("multipart/form-data"):
                        req = _parse_multipart(raw, ctype)
                    else:
                        req = json.loads(raw)
                except ValueError as e:
                    self._reply(400, {"error": f"bad request body: {e}"})
                    return
                job_id = backend._submit(req)
                self._reply(200, {"job_id": job_id})

            def do_GET(self):
                if self.path.startswith("/jobs/"):
                    job_id = self.path.split("/")[-1]
                    status = backend._status(job_id)
                    if status is None:
                        self._reply(404, {"error": f"unknown job {job_id}"})
                    else:
                        self._reply(200, status)
                elif self.path.startswith("/videos/"):
                    job_id = self.path.split("/")[-1]
                    video = backend._video(job_id)
                    if video is None:
                        self._reply(404, {"error": f"no video for job {job_id}"})
                    else:
                        self._reply(200, video, content_type="video/x-msvideo")
                else:
                    self._reply(404, {"error": "not found"})

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> str:
        self._thread.start()
        return self.endpoint

    @property
    def endpoint(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()

    # -- protocol backing ---------------------------------------------------

    def _submit(self, req: dict) -> str:
        with self._lock:
            job_id = f"job{self._next_id}"
            self._next_id += 1
        task_id = req.get("metadata", {}).get("task_id", "")
        fail = "FAIL" in req.get("prompt", "")
        video = None
        error = None
        if not fail:
            task = self.task_lookup(task_id)
            if task is None:
                fail, error = True, f"unknown task {task_id!r}"
            else:
                # a real model would consume the payload; decode it to prove
                # the request was well-formed
                decode_image_payload(req["image"])
                video = mock_generate(task, self.mode)
        with self._lock:
            self.jobs[job_id] = {
                "video": video,
                "error": error or ("requested failure" if fail else None),
                "failed": fail,
            }
            self.poll_counts[job_id] = 0
        return job_id

    def _status(self, job_id: str) -> dict | None:
        with self._lock:
            job = self.jobs.get(job_id)
            if job is None:
                return None
            self.poll_counts[job_id] += 1
            if self.poll_counts[job_id] <= self.status_delay_polls:
                return {"status": "running"}
            if job["failed"]:
                return {"status": "failed", "error": job["error"]}
            return {"status": "succeeded", "video_url": f"/videos/{job_id}"}

    def _video(self, job_id: str) -> bytes | None:
        with self._lock:
            job = self.jobs.get(job_id)
            return job["video"] if job else None
