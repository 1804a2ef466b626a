"""Orchestration of (model x task) inference jobs with bounded concurrency.

Layout under the run root:

    runs/<model>/<task_id>/video.*      generated video
    runs/<model>/<task_id>/result.json  one GenerationResult
    runs/manifest.json                  run id, task root, all results

Jobs whose result.json already reports success are skipped, so an
interrupted suite resumes where it stopped.
"""
from __future__ import annotations

import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..task import read_task
from .catalog import InferenceParams, ModelSpec
from .client import GenerationResult, submit_and_poll


def compute_run_id(pairs) -> str:
    digest = hashlib.sha256("\n".join(f"{m}\t{t}" for m, t in sorted(pairs)).encode()).hexdigest()
    return digest[:12]


def run_suite(
    models: list[ModelSpec],
    task_root: Path | str,
    run_root: Path | str,
    params: InferenceParams | None = None,
    concurrency: int = 4,
    progress=None,
) -> dict:
    """Execute every (model, task) job; partial failures never abort the
    suite. Returns the manifest, which is also written to run_root."""
    if concurrency < 1:
        raise ValueError(f"concurrency must be >= 1, got {concurrency}")
    task_root = Path(task_root)
    run_root = Path(run_root)
    run_root.mkdir(parents=True, exist_ok=True)
    params = params or InferenceParams()

    task_dirs = sorted(p for p in task_root.iterdir() if p.is_dir() and (p / "task.json").is_file())
    if not task_dirs:
        raise FileNotFoundError(f"no task directories under {task_root}")
    tasks = [read_task(d) for d in task_dirs]

    jobs: list[tuple[ModelSpec, object]] = [(m, t) for m in models for t in tasks]
    results: dict[tuple[str, str], GenerationResult] = {}
    lock = threading.Lock()

    def one(job):
        model, task = job
        out_dir = run_root / model.name / task.id
        existing = out_dir / "result.json"
        if existing.is_file():
            try:
                prior = GenerationResult(**json.loads(existing.read_text(encoding="utf-8")))
                if prior.ok() and prior.video_path and Path(prior.video_path).is_file():
                    with lock:
                        results[(model.name, task.id)] = prior
                    if progress:
                        progress(prior, skipped=True)
                    return
            except (json.JSONDecodeError, TypeError):
                pass  # corrupt result: redo the job
        result = submit_and_poll(model, task, params, out_dir)
        with lock:
            results[(model.name, task.id)] = result
        if progress:
            progress(result, skipped=False)

    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        list(pool.map(one, jobs))

    ordered = [results[(m.name, t.id)] for m in models for t in tasks]
    manifest = {
        "run_id": compute_run_id([(m.name, t.id) for m in models for t in tasks]),
        "task_root": str(task_root.resolve()),
        "models": [m.name for m in models],
        "results": [r.as_dict() for r in ordered],
    }
    (run_root / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def load_manifest(run_root: Path | str) -> dict:
    path = Path(run_root) / "manifest.json"
    if not path.is_file():
        raise FileNotFoundError(f"run manifest not found: {path}")
    return json.loads(path.read_text(encoding="utf-8"))
