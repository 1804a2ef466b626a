"""Automated judging: frame extraction, rubric prompts, a pluggable
vision-endpoint judge, and the deterministic pixel oracle.

Scores live on a 1-5 scale; 4 and 5 count as success everywhere, through
the single is_success predicate.
"""
from __future__ import annotations

import json
import os
import re
import shlex
import subprocess
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import requests

from .pipeline.avi import AviError, read_avi
from .pipeline.preprocess import letterbox
from .raster import ImageCanvas, decode_png, diff_count, encode_png, from_array
from .task import TaskUnit, read_task

SUCCESS_THRESHOLD = 4
ORACLE_CHANNEL_DELTA = 8  # per-channel tolerance
ORACLE_PIXEL_FRACTION = 0.01  # at most 1% of pixels may differ

FRAME_DECODER_ENV = "VIDREASON_FRAME_DECODER"


class ExtractionError(RuntimeError):
    """Video could not be decoded into frames."""


class JudgeParseError(RuntimeError):
    """The judge endpoint replied without a parsable score."""


class JudgeEndpointError(RuntimeError):
    """The judge endpoint failed; the call may be retried."""


def is_success(score: int) -> bool:
    return score >= SUCCESS_THRESHOLD


@dataclass
class Judgment:
    task_id: str
    model_name: str
    rater: str  # "oracle", "ai:<endpoint-name>", or "human:<annotator-id>"
    score: int
    explanation: str
    success: bool

    def __post_init__(self):
        if not 1 <= self.score <= 5:
            raise ValueError(f"score must be 1-5, got {self.score}")
        if self.success != is_success(self.score):
            raise ValueError(f"success flag {self.success} contradicts score {self.score}")

    def as_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "model_name": self.model_name,
            "rater": self.rater,
            "score": self.score,
            "explanation": self.explanation,
            "success": self.success,
        }


def make_judgment(task_id: str, model_name: str, rater: str, score: int, explanation: str) -> Judgment:
    return Judgment(task_id, model_name, rater, score, explanation, is_success(score))


# -- frame extraction ---------------------------------------------------------


def extract_frames(video_path: Path | str) -> tuple[ImageCanvas, ImageCanvas, ImageCanvas]:
    """First, temporal-midpoint, and last frame of a video.

    The native AVI container is parsed in-process. Any other container is
    delegated to the external decoder command named by $VIDREASON_FRAME_DECODER,
    which is invoked as `<cmd> <path> first|mid|last` and must emit a PNG on
    stdout.
    """
    path = Path(video_path)
    if not path.is_file():
        raise ExtractionError(f"video file not found: {path}")
    data = path.read_bytes()
    if data[:4] == b"RIFF":
        try:
            frames, _fps = read_avi(data)
        except AviError as e:
            raise ExtractionError(f"{path}: {e}") from None
        if not frames:
            raise ExtractionError(f"{path}: zero frames")
        first = from_array(frames[0])
        mid = from_array(frames[(len(frames) - 1) // 2])
        last = from_array(frames[-1])
        return first, mid, last
    decoder = os.environ.get(FRAME_DECODER_ENV)
    if not decoder:
        raise ExtractionError(
            f"{path}: not a native AVI and ${FRAME_DECODER_ENV} is unset; "
            "set it to a command `<cmd> <path> first|mid|last` that writes a PNG to stdout"
        )
    out = []
    for which in ("first", "mid", "last"):
        proc = subprocess.run(shlex.split(decoder) + [str(path), which], capture_output=True)
        if proc.returncode != 0:
            raise ExtractionError(f"frame decoder failed on {path} ({which}): {proc.stderr.decode()[:300]}")
        out.append(decode_png(proc.stdout))
    return out[0], out[1], out[2]


# -- prompts ------------------------------------------------------------------

_RUBRIC = """Score the generated video on this 1-5 scale:
5 - The final frame shows exactly the required solution: {solved}.
4 - The solution is correct with only trivial visual artifacts. Scores 4 and 5 mean the task was solved successfully.
3 - A meaningful partial attempt: {partial}.
2 - The video changes the scene but the attempt is wrong: {wrong}.
1 - No meaningful attempt: the scene is unchanged, degenerates, or ignores the instructions.

Reply in exactly this layout:
Score: <1-5>
Explanation: <one or two sentences>"""

_DOMAIN_CRITERIA = {
    "chess": {
        "solved": "exactly one legal piece move was made and it delivers immediate checkmate",
        "partial": "a legal move was played but it does not give checkmate",
        "wrong": "an illegal move, a teleporting piece, or pieces appearing/vanishing",
    },
    "maze": {
        "solved": "the green dot sits at the red flag after travelling only through open corridors",
        "partial": "the dot moved along corridors toward the flag but stopped short",
        "wrong": "the dot crossed walls or wandered without reaching the flag",
    },
    "rpm": {
        "solved": "the bottom-right cell contains the unique tile completing the row pattern",
        "partial": "a tile was drawn that matches some but not all pattern attributes",
        "wrong": "a tile inconsistent with the pattern, or other cells were altered",
    },
    "rotation": {
        "solved": "the structure is shown rotated exactly 180 degrees horizontally at the same tilt",
        "partial": "a partial rotation in the right direction with the structure intact",
        "wrong": "the structure deformed, changed shape, or rotated to a wrong angle",
    },
    "sudoku": {
        "solved": "the gray cell now contains the unique digit satisfying the row and column",
        "partial": "a digit was written but row/column constraints are violated",
        "wrong": "digits elsewhere changed or the written digit is unreadable",
    },
}


def build_judge_prompt(task: TaskUnit) -> str:
    crit = _DOMAIN_CRITERIA[task.domain]
    header = (
        f"You are judging a video-generation model on a {task.domain} reasoning task.\n"
        f"The model was shown the first image and this instruction:\n"
        f"---\n{task.prompt}\n---\n"
        "You receive, in order: the task's first frame, the expected final frame "
        "(ground truth), and three frames extracted from the generated video "
        "(first, middle, last). Judge whether the video's final state solves the task.\n\n"
    )
    return header + _RUBRIC.format(**crit)


# -- judges -------------------------------------------------------------------

_SCORE_RE = re.compile(r"score[^0-9]*?(\d+)", re.IGNORECASE)


def parse_score(reply: str) -> int:
    m = _SCORE_RE.search(reply)
    if not m:
        raise JudgeParseError(f"no 'Score: <n>' found in reply: {reply[:200]!r}")
    score = int(m.group(1))
    if not 1 <= score <= 5:
        raise JudgeParseError(f"score {score} outside 1-5 in reply: {reply[:200]!r}")
    return score


def _b64_png(canvas: ImageCanvas) -> dict:
    import base64

    return {"mime": "image/png", "data_base64": base64.b64encode(encode_png(canvas)).decode("ascii")}


def judge_ai(
    task: TaskUnit,
    frames: tuple[ImageCanvas, ImageCanvas, ImageCanvas],
    endpoint: str,
    endpoint_name: str = "vision",
) -> Judgment:
    """Send prompt + images to a vision endpoint and parse its 1-5 verdict.

    Request: POST <endpoint> {"prompt": str, "images": [{mime, data_base64}]}
    Response: {"reply": "<text containing 'Score: n'>"}
    """
    body = {
        "prompt": build_judge_prompt(task),
        "images": [
            _b64_png(task.first_frame),
            _b64_png(task.final_frame),
            *(_b64_png(f) for f in frames),
        ],
    }
    try:
        resp = requests.post(endpoint, json=body, timeout=120)
    except (requests.ConnectionError, requests.Timeout) as e:
        raise JudgeEndpointError(f"vision endpoint unreachable: {e}") from None
    if resp.status_code != 200:
        raise JudgeEndpointError(f"vision endpoint returned HTTP {resp.status_code}: {resp.text[:200]}")
    reply = resp.json().get("reply", "")
    score = parse_score(reply)
    return make_judgment(task.id, "", f"ai:{endpoint_name}", score, reply.strip())


def judge_oracle(task: TaskUnit, last_frame: ImageCanvas) -> Judgment:
    """Deterministic pixel comparison of the video's last frame against the
    withheld ground-truth final frame."""
    gt = task.final_frame
    frame = last_frame
    if (frame.width, frame.height) != (gt.width, gt.height):
        frame = letterbox(frame, (gt.width, gt.height))
    if (frame.width, frame.height) != (gt.width, gt.height):
        return make_judgment(
            task.id, "", "oracle", 1,
            f"frame size {last_frame.width}x{last_frame.height} cannot be compared to "
            f"ground truth {gt.width}x{gt.height}",
        )
    differing = diff_count(frame.px, gt.px, ORACLE_CHANNEL_DELTA)
    total = gt.width * gt.height
    fraction = differing / total
    if fraction <= ORACLE_PIXEL_FRACTION:
        score = 5
    else:
        score = 1
    return make_judgment(
        task.id, "", "oracle", score,
        f"{differing}/{total} pixels ({fraction:.4%}) differ by more than "
        f"{ORACLE_CHANNEL_DELTA} per channel (tolerance {ORACLE_PIXEL_FRACTION:.0%})",
    )


# -- batch judging ------------------------------------------------------------


def judge_run(
    manifest: dict,
    judge: str,
    judgments_path: Path | str,
    endpoint: str | None = None,
    endpoint_name: str = "vision",
) -> tuple[list[Judgment], list[dict]]:
    """One judgment per manifest result, merged into judgments_path.

    Failed or timed-out generations score 1. An unparsable or unreachable
    AI judge never invents a score: the item is recorded in the returned
    error list (and in judgments.errors.json) instead. Reruns replace
    previous entries with the same (task, model, rater) key, so the file
    is idempotent.
    """
    if judge not in ("oracle", "ai"):
        raise ValueError(f"judge must be 'oracle' or 'ai', got {judge!r}")
    if judge == "ai" and not endpoint:
        raise ValueError("judge 'ai' requires a vision endpoint URL")
    task_root = Path(manifest["task_root"])
    judgments: list[Judgment] = []
    errors: list[dict] = []
    task_cache: dict[str, TaskUnit] = {}
    rater = "oracle" if judge == "oracle" else f"ai:{endpoint_name}"
    for rec in manifest["results"]:
        task_id, model_name = rec["task_id"], rec["model_name"]
        if task_id not in task_cache:
            task_cache[task_id] = read_task(task_root / task_id)
        task = task_cache[task_id]
        if rec["status"] != "succeeded" or not rec.get("video_path"):
            judgments.append(
                make_judgment(task_id, model_name, rater, 1, f"generation failed: {rec.get('error') or rec['status']}")
            )
            continue
        try:
            frames = extract_frames(rec["video_path"])
        except ExtractionError as e:
            judgments.append(make_judgment(task_id, model_name, rater, 1, f"frame extraction failed: {e}"))
            continue
        if judge == "oracle":
            j = judge_oracle(task, frames[2])
            j.model_name = model_name
            judgments.append(j)
            continue
        try:
            try:
                j = judge_ai(task, frames, endpoint, endpoint_name)
            except JudgeEndpointError:
                j = judge_ai(task, frames, endpoint, endpoint_name)  # one retry
        except (JudgeParseError, JudgeEndpointError) as e:
            errors.append({"task_id": task_id, "model_name": model_name, "rater": rater, "error": str(e)})
            continue
        j.model_name = model_name
        judgments.append(j)
    merge_judgments(judgments_path, judgments)
    errors_path = Path(judgments_path).with_suffix(".errors.json")
    if errors:
        errors_path.write_text(json.dumps(errors, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return judgments, errors


def merge_judgments(path: Path | str, new: list[Judgment]) -> None:
    path = Path(path)
    existing: dict[tuple, dict] = {}
    if path.is_file():
        for rec in json.loads(path.read_text(encoding="utf-8")):
            existing[(rec["task_id"], rec["model_name"], rec["rater"])] = rec
    for j in new:
        existing[(j.task_id, j.model_name, j.rater)] = j.as_dict()
    ordered = [existing[k] for k in sorted(existing)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(ordered, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_judgments(path: Path | str) -> list[Judgment]:
    """Read judgments from a .json list or .jsonl stream."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"judgments file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".jsonl":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
    else:
        records = json.loads(text)
    return [
        Judgment(
            task_id=r["task_id"],
            model_name=r["model_name"],
            rater=r["rater"],
            score=r["score"],
            explanation=r.get("explanation", ""),
            success=r["success"],
        )
        for r in records
    ]


# -- scripted stub endpoint (test double for the vision judge) ---------------


class StubVisionServer:
    """Tiny HTTP endpoint answering the vision-judge protocol with scripted
    replies. `script` maps a prompt substring to a reply; `default` covers
    the rest."""

    def __init__(self, script: dict[str, str] | None = None, default: str = "Score: 5\nExplanation: ok"):
        self.script = script or {}
        self.default = default
        self.url = ""
        self.requests: list[dict] = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length))
                stub.requests.append(body)
                reply = stub.default
                for key, value in stub.script.items():
                    if key in body.get("prompt", ""):
                        reply = value
                        break
                payload = json.dumps({"reply": reply}).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    def start(self) -> str:
        self._thread.start()
        host, port = self._server.server_address
        return f"http://{host}:{port}"

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self):
        self.url = self.start()
        return self

    def __exit__(self, *exc):
        self.stop()
