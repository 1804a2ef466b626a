"""Job submission and polling against a video-generation backend.

The wire protocol is a small JSON-over-HTTP job API (documented in the
README): POST /jobs returns {"job_id"}, GET /jobs/<id> reports status, and
the terminal status carries a video_url to download. Models whose catalog
endpoint is "mock:<mode>" are generated in-process instead.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from pathlib import Path

import requests

from ..raster import from_array
from ..task import TaskUnit
from .catalog import InferenceParams, ModelSpec, orientation_of, resolve_resolution
from .mock import mock_generate
from .preprocess import encode_image_payload, letterbox


@dataclass
class GenerationResult:
    task_id: str
    model_name: str
    status: str  # succeeded | failed | timeout
    video_path: str | None
    latency_s: float
    error: str | None = None
    started_at: float = 0.0
    finished_at: float = 0.0
    polls: int = 0

    def ok(self) -> bool:
        return self.status == "succeeded"

    def as_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "model_name": self.model_name,
            "status": self.status,
            "video_path": self.video_path,
            "latency_s": self.latency_s,
            "error": self.error,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "polls": self.polls,
        }


def _auth_headers(model: ModelSpec) -> dict:
    if not model.auth_env:
        return {}
    token = os.environ.get(model.auth_env)
    if not token:
        raise RuntimeError(f"model {model.name} needs auth env var {model.auth_env}, which is unset")
    return {"Authorization": f"Bearer {token}"}


def _submit_request(model: ModelSpec, task: TaskUnit, params: InferenceParams) -> dict:
    """Keyword arguments for requests.post, honoring the model's encoding."""
    target = resolve_resolution(model, orientation_of(task.first_frame.width, task.first_frame.height))
    boxed = letterbox(task.first_frame, target)
    payload = encode_image_payload(boxed, model.encoding)
    meta = {
        "model": model.name,
        "prompt": task.prompt,
        "params": params.as_dict(),
        "metadata": {"task_id": task.id},
    }
    if model.encoding == "multipart":
        return {
            "data": {"request": json.dumps(meta)},
            "files": {"image": ("first_frame.png", payload["data"], payload["mime"])},
        }
    meta["image"] = payload
    return {"json": meta}


def _post_with_retry(url: str, kwargs: dict, headers: dict, timeout: float) -> requests.Response:
    last_err = None
    for attempt in range(2):  # one retry on transient network failure
        try:
            return requests.post(url, headers=headers, timeout=timeout, **kwargs)
        except (requests.ConnectionError, requests.Timeout) as e:
            last_err = e
    raise last_err


def submit_and_poll(
    model: ModelSpec,
    task: TaskUnit,
    params: InferenceParams,
    out_dir: Path,
) -> GenerationResult:
    """Run one inference job and leave video + result.json in out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()

    def finish(status: str, video_path: Path | None, error: str | None, polls: int = 0) -> GenerationResult:
        finished = time.time()
        result = GenerationResult(
            task_id=task.id,
            model_name=model.name,
            status=status,
            video_path=str(video_path) if video_path else None,
            latency_s=finished - started,
            error=error,
            started_at=started,
            finished_at=finished,
            polls=polls,
        )
        (out_dir / "result.json").write_text(json.dumps(result.as_dict(), indent=2) + "\n", encoding="utf-8")
        return result

    if model.is_mock():
        mode = model.endpoint.split(":", 1)[1]
        try:
            video = mock_generate(task, mode)
        except ValueError as e:
            return finish("failed", None, str(e))
        video_path = out_dir / "video.avi"
        video_path.write_bytes(video)
        return finish("succeeded", video_path, None)

    if model.encoding == "local":
        return finish("failed", None, "catalog encoding 'local' is reserved but not implemented")

    try:
        headers = _auth_headers(model)
    except RuntimeError as e:
        return finish("failed", None, str(e))
    kwargs = _submit_request(model, task, params)

    try:
        resp = _post_with_retry(f"{model.endpoint}/jobs", kwargs, headers, timeout=model.max_wait_s)
    except (requests.ConnectionError, requests.Timeout) as e:
        return finish("failed", None, f"submit failed after retry: {e}")
    if resp.status_code != 200:
        return finish("failed", None, f"submit rejected: HTTP {resp.status_code}: {resp.text[:200]}")
    job_id = resp.json().get("job_id")
    if not job_id:
        return finish("failed", None, f"submit reply missing job_id: {resp.text[:200]}")

    polls = 0
    deadline = started + model.max_wait_s
    while True:
        if time.time() >= deadline:
            return finish("timeout", None, f"no terminal status within {model.max_wait_s}s", polls)
        time.sleep(model.poll_interval_s)
        try:
            status_resp = requests.get(f"{model.endpoint}/jobs/{job_id}", headers=headers, timeout=30)
        except (requests.ConnectionError, requests.Timeout) as e:
            return finish("failed", None, f"poll failed: {e}", polls)
        polls += 1
        if status_resp.status_code != 200:
            return finish("failed", None, f"poll rejected: HTTP {status_resp.status_code}", polls)
        doc = status_resp.json()
        state = doc.get("status")
        if state in ("queued", "running"):
            continue
        if state == "failed":
            return finish("failed", None, doc.get("error") or "backend reported failure", polls)
        if state == "succeeded":
            url = doc.get("video_url", "")
            if url.startswith("/"):
                url = model.endpoint + url
            try:
                video_resp = requests.get(url, headers=headers, timeout=60)
            except (requests.ConnectionError, requests.Timeout) as e:
                return finish("failed", None, f"video download failed: {e}", polls)
            if video_resp.status_code != 200 or not video_resp.content:
                return finish("failed", None, f"video download rejected: HTTP {video_resp.status_code}", polls)
            suffix = Path(url.split("?")[0]).suffix or ".avi"
            video_path = out_dir / f"video{suffix}"
            video_path.write_bytes(video_resp.content)
            return finish("succeeded", video_path, None, polls)
        return finish("failed", None, f"unknown status {state!r}", polls)


def load_result(path: Path) -> GenerationResult:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return GenerationResult(**doc)


def mock_first_frame_canvas(result_video: bytes):
    """Convenience for tests: first frame of an AVI as a canvas."""
    from .avi import read_avi

    frames, _ = read_avi(result_video)
    return from_array(frames[0])
