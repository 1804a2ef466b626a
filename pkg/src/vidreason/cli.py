"""Command-line entry point: generate, infer, judge, stats, serve.

Exit codes: 0 success, 1 configuration/usage error, 2 partial per-item
failures (the run completed but some jobs failed).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .task import DOMAINS


def _cmd_generate(args) -> int:
    from .generate import generate_domain
    from .rotation import GenerationError

    domains = list(DOMAINS) if args.domain == "all" else [args.domain]
    for d in domains:
        if d not in DOMAINS:
            print(f"error: unknown domain {d!r}; expected one of {', '.join(DOMAINS)}", file=sys.stderr)
            return 1
    if args.count < 1:
        print(f"error: --count must be >= 1, got {args.count}", file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for d in domains:
        try:
            paths = generate_domain(d, args.count, args.seed, out)
        except GenerationError as e:
            print(f"error: generation failed for domain {d}: {e}", file=sys.stderr)
            return 1
        rows.append((d, len(paths)))
    width = max(len(d) for d, _ in rows)
    print(f"{'domain'.ljust(width)}  tasks")
    for d, n in rows:
        print(f"{d.ljust(width)}  {n}")
    print(f"total {sum(n for _, n in rows)} task directories under {out}")
    return 0


def _cmd_infer(args) -> int:
    from .pipeline import InferenceParams, load_catalog, mock_catalog, run_suite
    from .pipeline.catalog import CatalogError

    if args.catalog == "mock":
        models = mock_catalog()
    else:
        try:
            models = load_catalog(args.catalog)
        except CatalogError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
    if args.models:
        wanted = set(args.models.split(","))
        unknown = wanted - {m.name for m in models}
        if unknown:
            print(f"error: models not in catalog: {', '.join(sorted(unknown))}", file=sys.stderr)
            return 1
        models = [m for m in models if m.name in wanted]
    tasks = Path(args.tasks)
    if not tasks.is_dir():
        print(f"error: task directory not found: {tasks}", file=sys.stderr)
        return 1

    def progress(result, skipped):
        tag = "skip" if skipped else result.status
        print(f"[{tag:>9}] {result.model_name} x {result.task_id} ({result.latency_s:.2f}s)")

    try:
        manifest = run_suite(
            models,
            tasks,
            Path(args.out),
            InferenceParams(duration_s=args.duration),
            concurrency=args.concurrency,
            progress=progress,
        )
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    failed = [r for r in manifest["results"] if r["status"] != "succeeded"]
    print(f"{len(manifest['results'])} jobs, {len(failed)} failed; manifest at {Path(args.out) / 'manifest.json'}")
    return 2 if failed else 0


def _cmd_judge(args) -> int:
    from .judge import judge_run
    from .pipeline.runner import load_manifest

    try:
        manifest = load_manifest(args.runs)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    endpoint = None
    if args.judge == "ai":
        endpoint = args.endpoint or os.environ.get("VIDREASON_JUDGE_URL")
        if not endpoint:
            print("error: --judge ai needs --endpoint or $VIDREASON_JUDGE_URL", file=sys.stderr)
            return 1
    out = Path(args.out) if args.out else Path(args.runs) / "judgments.json"
    judgments, errors = judge_run(manifest, args.judge, out, endpoint=endpoint)
    fails = sum(1 for j in judgments if "generation failed" in j.explanation)
    print(f"{len(judgments)} judgments ({sum(j.success for j in judgments)} successes) -> {out}")
    if errors:
        print(f"{len(errors)} items not scored (judge errors) -> {out.with_suffix('.errors.json')}", file=sys.stderr)
    return 2 if fails or errors else 0


def _cmd_stats(args) -> int:
    from .judge import load_judgments
    from .stats import build_report, emit_report

    try:
        judgments = load_judgments(args.judgments)
        human = load_judgments(args.human) if args.human else None
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if not judgments:
        print(f"error: no judgments in {args.judgments}", file=sys.stderr)
        return 1
    report = build_report(judgments, human)
    written = emit_report(report, Path(args.out))
    doc_path = written["markdown"]
    print(doc_path.read_text(encoding="utf-8"))
    print(f"reports written to {', '.join(str(p) for p in written.values())}")
    return 0


def _cmd_serve(args) -> int:
    from .service import AnnotationService, AnnotationStore

    try:
        store = AnnotationStore(Path(args.runs), tasks_root=args.tasks, reveal_final=args.reveal_final)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    ui_dir = Path(args.ui) if args.ui else None
    if ui_dir and not ui_dir.is_dir():
        print(f"error: UI directory not found: {ui_dir}", file=sys.stderr)
        return 1
    service = AnnotationService(store, port=args.port, ui_dir=ui_dir)
    print(f"annotation service for run {store.run_id} on {service.url}")
    print(f"items: {len(store.items)}; final frames {'revealed' if store.reveal_final else 'withheld'}")
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        print("stopped")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vidreason", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit verified task directories")
    g.add_argument("--domain", default="all", help=f"one of {', '.join(DOMAINS)} or 'all'")
    g.add_argument("--count", type=int, required=True, help="tasks per domain")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="task root directory")
    g.set_defaults(func=_cmd_generate)

    i = sub.add_parser("infer", help="run every (model, task) inference job")
    i.add_argument("--catalog", required=True, help="catalog JSON path, or 'mock' for the built-in mock models")
    i.add_argument("--models", default="", help="comma-separated subset of catalog model names")
    i.add_argument("--tasks", required=True)
    i.add_argument("--out", required=True, help="run root directory")
    i.add_argument("--concurrency", type=int, default=4)
    i.add_argument("--duration", type=float, default=8.0, help="requested video duration in seconds")
    i.set_defaults(func=_cmd_infer)

    j = sub.add_parser("judge", help="score a finished run")
    j.add_argument("--runs", required=True, help="run root with manifest.json")
    j.add_argument("--judge", choices=("oracle", "ai"), default="oracle")
    j.add_argument("--endpoint", default="", help="vision endpoint URL for --judge ai")
    j.add_argument("--out", default="", help="judgments file (default <runs>/judgments.json)")
    j.set_defaults(func=_cmd_judge)

    s = sub.add_parser("stats", help="success tables and rater agreement")
    s.add_argument("--judgments", required=True)
    s.add_argument("--human", default="", help="human scores file (jsonl) for agreement statistics")
    s.add_argument("--out", required=True, help="report output directory")
    s.set_defaults(func=_cmd_stats)

    v = sub.add_parser("serve", help="start the human annotation service")
    v.add_argument("--runs", required=True)
    v.add_argument("--tasks", default=None, help="override the manifest's task root")
    v.add_argument("--port", type=int, default=8008)
    v.add_argument("--reveal-final", action="store_true", help="let annotators see expected final frames")
    v.add_argument("--ui", default="", help="static UI directory to serve at /")
    v.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
