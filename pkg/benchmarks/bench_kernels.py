"""Benchmark the raster kernels: numba @njit vs the pure-numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [repeats]

Workloads mirror the hot paths of the generators and the oracle judge:
polygon fill on a rotation-task-sized canvas, maze-to-model letterbox
scaling, and full-frame pixel diffs. The first numba call includes JIT
compilation; it is timed separately as "warmup".
"""
from __future__ import annotations

import sys
import time

import numpy as np

from vidreason.raster import kernels


def _workloads():
    rng = np.random.default_rng(0)
    canvas = np.full((400, 400, 3), 255, np.uint8)
    quad = [(40.0, 60.0), (330.0, 90.0), (300.0, 350.0), (70.0, 310.0)]
    frame_a = rng.integers(0, 256, (480, 832, 3), dtype=np.uint8)
    noise = rng.integers(-4, 5, frame_a.shape, dtype=np.int16)
    frame_b = np.clip(frame_a.astype(np.int16) + noise, 0, 255).astype(np.uint8)

    def poly():
        kernels.fill_polygon(canvas.copy(), quad, (0x70, 0x70, 0xB0))

    def scale():
        kernels.scale_nearest(frame_a, 720, 1280)

    def diff():
        kernels.diff_count(frame_a, frame_b, 8)

    def circle():
        kernels.fill_circle(canvas.copy(), 200, 200, 150, (20, 160, 40))

    return [("fill_polygon 400x400", poly), ("scale 832x480->1280x720", scale),
            ("diff_count 832x480", diff), ("fill_circle r=150", circle)]


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    rows = []
    for backend in kernels.BACKENDS:
        kernels.use_backend(backend)
        for name, fn in _workloads():
            if backend == "numba":
                t0 = time.perf_counter()
                fn()  # includes compilation on first use
                warmup = time.perf_counter() - t0
            else:
                warmup = 0.0
            rows.append((name, backend, _time(fn, repeats), warmup))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  backend  best-of-{repeats}   warmup")
    for name, backend, best, warmup in rows:
        warm = f"{warmup * 1e3:8.1f}ms" if warmup else "         -"
        print(f"{name.ljust(width)}  {backend:7s} {best * 1e3:8.2f}ms {warm}")

    if "numba" in kernels.BACKENDS:
        print("\nspeedup (numpy best / numba best):")
        by_key = {(r[0], r[1]): r[2] for r in rows}
        for name, _ in _workloads():
            ratio = by_key[(name, "numpy")] / by_key[(name, "numba")]
            print(f"  {name.ljust(width)}  {ratio:6.1f}x")


if __name__ == "__main__":
    main()
