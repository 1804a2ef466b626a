"""Hot pixel loops with two interchangeable backends.

Every kernel exists twice: a numba @njit build of the scalar reference loop
and a vectorized pure-numpy fallback. Both evaluate the same arithmetic in
the same order, so their outputs are byte-identical; the test suite asserts
this and benchmarks/bench_kernels.py compares their speed.

Backend selection: VIDREASON_BACKEND=numba|numpy. Unset picks numba when it
imports, numpy otherwise.
"""
from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    njit = None
    HAS_NUMBA = False


# ---------------------------------------------------------------------------
# Reference scalar loops (compiled by numba; numpy versions mirror them).


def _fill_polygon_loop(buf, xs, ys, r, g, b, x_lo, y_lo, x_hi, y_hi):
    n = xs.shape[0]
    for y in range(y_lo, y_hi + 1):
        py = y + 0.5
        for x in range(x_lo, x_hi + 1):
            px = x + 0.5
            inside = False
            j = n - 1
            for i in range(n):
                yi = ys[i]
                yj = ys[j]
                if (yi > py) != (yj > py):
                    xcross = (xs[j] - xs[i]) * (py - yi) / (yj - yi) + xs[i]
                    if px < xcross:
                        inside = not inside
                j = i
            if inside:
                buf[y, x, 0] = r
                buf[y, x, 1] = g
                buf[y, x, 2] = b


def _fill_circle_loop(buf, cx, cy, rad, r, g, b, x_lo, y_lo, x_hi, y_hi):
    rr = rad * rad
    for y in range(y_lo, y_hi + 1):
        dy = y - cy
        for x in range(x_lo, x_hi + 1):
            dx = x - cx
            if dx * dx + dy * dy <= rr:
                buf[y, x, 0] = r
                buf[y, x, 1] = g
                buf[y, x, 2] = b


def _draw_line_loop(buf, x0, y0, x1, y1, r, g, b):
    h = buf.shape[0]
    w = buf.shape[1]
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    x = x0
    y = y0
    while True:
        if 0 <= x < w and 0 <= y < h:
            buf[y, x, 0] = r
            buf[y, x, 1] = g
            buf[y, x, 2] = b
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x += sx
        if e2 <= dx:
            err += dx
            y += sy


def _scale_nearest_loop(src, dst):
    sh = src.shape[0]
    sw = src.shape[1]
    dh = dst.shape[0]
    dw = dst.shape[1]
    for y in range(dh):
        sy = y * sh // dh
        for x in range(dw):
            sx = x * sw // dw
            dst[y, x, 0] = src[sy, sx, 0]
            dst[y, x, 1] = src[sy, sx, 1]
            dst[y, x, 2] = src[sy, sx, 2]


def _diff_count_loop(a, b, delta):
    # note: int() on a uint8 stays unsigned under numba; cast via np.int64
    n = 0
    for y in range(a.shape[0]):
        for x in range(a.shape[1]):
            for c in range(3):
                d = np.int64(a[y, x, c]) - np.int64(b[y, x, c])
                if d > delta or d < -delta:
                    n += 1
                    break
    return n


# ---------------------------------------------------------------------------
# Pure-numpy fallbacks. Arithmetic matches the scalar loops exactly: the
# polygon cross-point expression keeps the same operation order, index maps
# use the same floor division, diff counts the same per-pixel predicate.


def _fill_polygon_numpy(buf, xs, ys, r, g, b, x_lo, y_lo, x_hi, y_hi):
    n = xs.shape[0]
    py = np.arange(y_lo, y_hi + 1, dtype=np.float64) + 0.5
    px = np.arange(x_lo, x_hi + 1, dtype=np.float64) + 0.5
    inside = np.zeros((py.size, px.size), dtype=bool)
    j = n - 1
    for i in range(n):
        yi = ys[i]
        yj = ys[j]
        crosses = (yi > py) != (yj > py)
        if crosses.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                xcross = (xs[j] - xs[i]) * (py - yi) / (yj - yi) + xs[i]
            inside ^= crosses[:, None] & (px[None, :] < xcross[:, None])
        j = i
    ys_idx, xs_idx = np.nonzero(inside)
    buf[ys_idx + y_lo, xs_idx + x_lo] = (r, g, b)


def _fill_circle_numpy(buf, cx, cy, rad, r, g, b, x_lo, y_lo, x_hi, y_hi):
    dy = np.arange(y_lo, y_hi + 1, dtype=np.int64) - cy
    dx = np.arange(x_lo, x_hi + 1, dtype=np.int64) - cx
    mask = dy[:, None] ** 2 + dx[None, :] ** 2 <= rad * rad
    ys_idx, xs_idx = np.nonzero(mask)
    buf[ys_idx + y_lo, xs_idx + x_lo] = (r, g, b)


def _scale_nearest_numpy(src, dst):
    sh, sw = src.shape[0], src.shape[1]
    dh, dw = dst.shape[0], dst.shape[1]
    rows = np.arange(dh, dtype=np.int64) * sh // dh
    cols = np.arange(dw, dtype=np.int64) * sw // dw
    dst[:] = src[rows][:, cols]


def _diff_count_numpy(a, b, delta):
    d = np.abs(a.astype(np.int16) - b.astype(np.int16))
    return int((d > delta).any(axis=2).sum())


_NUMPY_IMPLS = {
    "fill_polygon": _fill_polygon_numpy,
    "fill_circle": _fill_circle_numpy,
    "draw_line": _draw_line_loop,  # not vectorizable; the scalar loop is the fallback
    "scale_nearest": _scale_nearest_numpy,
    "diff_count": _diff_count_numpy,
}

if HAS_NUMBA:
    _NUMBA_IMPLS = {
        "fill_polygon": njit(cache=True)(_fill_polygon_loop),
        "fill_circle": njit(cache=True)(_fill_circle_loop),
        "draw_line": njit(cache=True)(_draw_line_loop),
        "scale_nearest": njit(cache=True)(_scale_nearest_loop),
        "diff_count": njit(cache=True)(_diff_count_loop),
    }

BACKENDS = ["numpy"] + (["numba"] if HAS_NUMBA else [])


def _default_backend() -> str:
    choice = os.environ.get("VIDREASON_BACKEND", "").strip().lower()
    if choice:
        if choice not in ("numba", "numpy"):
            raise ValueError(f"VIDREASON_BACKEND must be 'numba' or 'numpy', got {choice!r}")
        if choice == "numba" and not HAS_NUMBA:
            raise RuntimeError("VIDREASON_BACKEND=numba but numba is not installed")
        return choice
    return "numba" if HAS_NUMBA else "numpy"


_active = _default_backend()


def active_backend() -> str:
    return _active


def use_backend(name: str) -> None:
    """Switch the kernel backend at runtime (used by tests and benchmarks)."""
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {BACKENDS}")
    global _active
    _active = name


def _impl(name: str):
    table = _NUMBA_IMPLS if _active == "numba" else _NUMPY_IMPLS
    return table[name]


def impl_for(backend: str, name: str):
    """Direct access to one backend's kernel, independent of the active one."""
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _NUMBA_IMPLS[name]
    if backend == "numpy":
        return _NUMPY_IMPLS[name]
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# Public entry points; these clip/validate, then dispatch to the backend.


def fill_polygon(buf: np.ndarray, points, color) -> None:
    xs = np.asarray([p[0] for p in points], dtype=np.float64)
    ys = np.asarray([p[1] for p in points], dtype=np.float64)
    if xs.size < 3:
        return
    h, w = buf.shape[0], buf.shape[1]
    x_lo = max(0, int(math.floor(xs.min())))
    x_hi = min(w - 1, int(math.ceil(xs.max())))
    y_lo = max(0, int(math.floor(ys.min())))
    y_hi = min(h - 1, int(math.ceil(ys.max())))
    if x_lo > x_hi or y_lo > y_hi:
        return
    r, g, b = color
    _impl("fill_polygon")(buf, xs, ys, r, g, b, x_lo, y_lo, x_hi, y_hi)


def fill_circle(buf: np.ndarray, cx: int, cy: int, rad: int, color) -> None:
    if rad < 0:
        raise ValueError(f"negative radius {rad}")
    h, w = buf.shape[0], buf.shape[1]
    x_lo = max(0, cx - rad)
    x_hi = min(w - 1, cx + rad)
    y_lo = max(0, cy - rad)
    y_hi = min(h - 1, cy + rad)
    if x_lo > x_hi or y_lo > y_hi:
        return
    r, g, b = color
    _impl("fill_circle")(buf, cx, cy, rad, r, g, b, x_lo, y_lo, x_hi, y_hi)


def draw_line(buf: np.ndarray, x0: int, y0: int, x1: int, y1: int, color) -> None:
    r, g, b = color
    _impl("draw_line")(buf, int(x0), int(y0), int(x1), int(y1), r, g, b)


def scale_nearest(src: np.ndarray, dst_h: int, dst_w: int) -> np.ndarray:
    if dst_h <= 0 or dst_w <= 0:
        raise ValueError(f"invalid target size {dst_w}x{dst_h}")
    dst = np.empty((dst_h, dst_w, 3), dtype=np.uint8)
    _impl("scale_nearest")(np.ascontiguousarray(src), dst)
    return dst


def diff_count(a: np.ndarray, b: np.ndarray, delta: int) -> int:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return int(_impl("diff_count")(np.ascontiguousarray(a), np.ascontiguousarray(b), delta))
