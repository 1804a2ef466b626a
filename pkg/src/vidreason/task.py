"""Task-pair data model and on-disk manifest layout.

A task is a triple: the first frame a model sees, the prompt it follows,
and a withheld final frame used only for evaluation. On disk each task is
one directory of five fixed-name files, trivially diffable:

    <root>/<id>/
        first_frame.png
        final_frame.png
        prompt.txt
        ground_truth.json   # domain-specific record, sorted keys
        task.json           # {id, domain, seed, width, height}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .raster import ImageCanvas, decode_png, encode_png

DOMAINS = ("chess", "maze", "rpm", "rotation", "sudoku")

FIRST_FRAME = "first_frame.png"
FINAL_FRAME = "final_frame.png"
PROMPT = "prompt.txt"
GROUND_TRUTH = "ground_truth.json"
TASK_META = "task.json"


class TaskError(Exception):
    """Task construction or manifest I/O failure."""


@dataclass
class TaskUnit:
    id: str
    domain: str
    first_frame: ImageCanvas
    final_frame: ImageCanvas
    prompt: str
    ground_truth: dict
    seed: int
    dpi: int | None = None

    def validate(self) -> None:
        if self.domain not in DOMAINS:
            raise TaskError(f"unknown domain {self.domain!r}")
        ff, lf = self.first_frame, self.final_frame
        if (ff.width, ff.height) != (lf.width, lf.height):
            raise TaskError(
                f"{self.id}: frame dimensions differ: "
                f"{ff.width}x{ff.height} vs {lf.width}x{lf.height}"
            )
        if ff.same_pixels(lf):
            raise TaskError(f"{self.id}: final frame is identical to first frame")
        # ground truth must survive a serialization round trip unchanged
        if json.loads(json.dumps(self.ground_truth, sort_keys=True)) != self.ground_truth:
            raise TaskError(f"{self.id}: ground truth does not round-trip through JSON")


def make_task_id(domain: str, seed: int, index: int) -> str:
    return f"{domain}_{seed}_{index}"


def write_task(task: TaskUnit, root: Path | str) -> Path:
    root = Path(root)
    if not root.is_dir():
        raise TaskError(f"task root {root} does not exist or is not a directory")
    task.validate()
    out = root / task.id
    try:
        out.mkdir(exist_ok=False)
    except FileExistsError:
        raise TaskError(f"refusing to overwrite existing task directory {out}") from None
    except OSError as e:
        raise TaskError(f"cannot create {out}: {e}") from e
    try:
        (out / FIRST_FRAME).write_bytes(encode_png(task.first_frame, dpi=task.dpi))
        (out / FINAL_FRAME).write_bytes(encode_png(task.final_frame, dpi=task.dpi))
        (out / PROMPT).write_text(task.prompt, encoding="utf-8")
        (out / GROUND_TRUTH).write_text(
            json.dumps(task.ground_truth, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        meta = {
            "id": task.id,
            "domain": task.domain,
            "seed": task.seed,
            "width": task.first_frame.width,
            "height": task.first_frame.height,
        }
        (out / TASK_META).write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise TaskError(f"write failed under {out}: {e}") from e
    return out


def _require(path: Path) -> Path:
    if not path.is_file():
        raise TaskError(f"missing task file: {path}")
    return path


def read_task(task_dir: Path | str) -> TaskUnit:
    d = Path(task_dir)
    if not d.is_dir():
        raise TaskError(f"task directory {d} does not exist")
    meta_raw = _require(d / TASK_META).read_text(encoding="utf-8")
    gt_raw = _require(d / GROUND_TRUTH).read_text(encoding="utf-8")
    try:
        meta = json.loads(meta_raw)
    except json.JSONDecodeError as e:
        raise TaskError(f"corrupt {d / TASK_META}: {e.msg} at byte {e.pos}") from None
    try:
        ground_truth = json.loads(gt_raw)
    except json.JSONDecodeError as e:
        raise TaskError(f"corrupt {d / GROUND_TRUTH}: {e.msg} at byte {e.pos}") from None
    first = decode_png(_require(d / FIRST_FRAME).read_bytes())
    final = decode_png(_require(d / FINAL_FRAME).read_bytes())
    prompt = _require(d / PROMPT).read_text(encoding="utf-8")
    task = TaskUnit(
        id=meta["id"],
        domain=meta["domain"],
        first_frame=first,
        final_frame=final,
        prompt=prompt,
        ground_truth=ground_truth,
        seed=meta["seed"],
    )
    if (first.width, first.height) != (meta["width"], meta["height"]):
        raise TaskError(
            f"{d}: first frame is {first.width}x{first.height}, "
            f"task.json says {meta['width']}x{meta['height']}"
        )
    task.validate()
    return task


def list_task_dirs(root: Path | str) -> list[Path]:
    root = Path(root)
    return sorted(p for p in root.iterdir() if p.is_dir() and (p / TASK_META).is_file())
