"""RGB8 canvas with deterministic, clipped 2D drawing primitives.

Anti-aliasing is deliberately absent: the same draw sequence must always
produce the same bytes.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .glyphs import GLYPH_COLS, GLYPH_ROWS, glyph_bits

Color = tuple[int, int, int]

WHITE: Color = (255, 255, 255)
BLACK: Color = (0, 0, 0)

_mask_cache: dict[tuple[str, int], np.ndarray] = {}


def _glyph_mask(ch: str, height: int) -> np.ndarray:
    """Boolean pixel mask of one glyph at the given height (cached)."""
    key = (ch, height)
    cached = _mask_cache.get(key)
    if cached is not None:
        return cached
    bits = glyph_bits(ch)
    gw = max(1, (height * GLYPH_COLS + GLYPH_ROWS // 2) // GLYPH_ROWS)
    src = np.array(
        [[bool(bits[r] & (1 << (GLYPH_COLS - 1 - c))) for c in range(GLYPH_COLS)] for r in range(GLYPH_ROWS)],
        dtype=bool,
    )
    rows = np.arange(height) * GLYPH_ROWS // height
    cols = np.arange(gw) * GLYPH_COLS // gw
    mask = src[rows][:, cols]
    _mask_cache[key] = mask
    return mask


class ImageCanvas:
    """Row-major RGB8 pixel buffer. All drawing ops clip to bounds."""

    __slots__ = ("width", "height", "px")

    def __init__(self, width: int, height: int, px: np.ndarray):
        self.width = width
        self.height = height
        self.px = px

    def clone(self) -> "ImageCanvas":
        return ImageCanvas(self.width, self.height, self.px.copy())

    def same_pixels(self, other: "ImageCanvas") -> bool:
        return self.px.shape == other.px.shape and bool(np.array_equal(self.px, other.px))

    def pixel(self, x: int, y: int) -> Color:
        r, g, b = self.px[y, x]
        return int(r), int(g), int(b)

    # -- primitives ---------------------------------------------------------

    def fill_rect(self, x: int, y: int, w: int, h: int, color: Color) -> None:
        x0 = max(0, x)
        y0 = max(0, y)
        x1 = min(self.width, x + w)
        y1 = min(self.height, y + h)
        if x0 < x1 and y0 < y1:
            self.px[y0:y1, x0:x1] = color

    def draw_line(self, x0: int, y0: int, x1: int, y1: int, color: Color) -> None:
        kernels.draw_line(self.px, x0, y0, x1, y1, color)

    def fill_circle(self, cx: int, cy: int, radius: int, color: Color) -> None:
        kernels.fill_circle(self.px, cx, cy, radius, color)

    def fill_polygon(self, points, color: Color) -> None:
        kernels.fill_polygon(self.px, points, color)

    def draw_polyline(self, points, color: Color) -> None:
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            self.draw_line(int(round(x0)), int(round(y0)), int(round(x1)), int(round(y1)), color)

    def draw_text(self, text: str, center: tuple[int, int], height: int, color: Color) -> None:
        """Draw `text` centered on `center` with glyphs `height` px tall.

        Glyphs come from the embedded 5x7 table, scaled by nearest neighbor;
        an unsupported character raises GlyphError naming it.
        """
        if height <= 0:
            raise ValueError(f"glyph height must be positive, got {height}")
        masks = [_glyph_mask(ch, height) for ch in text]
        gw = max(1, (height * GLYPH_COLS + GLYPH_ROWS // 2) // GLYPH_ROWS)
        spacing = max(1, (height + GLYPH_ROWS // 2) // GLYPH_ROWS)
        total_w = len(masks) * gw + (len(masks) - 1) * spacing if masks else 0
        left = center[0] - total_w // 2
        top = center[1] - height // 2
        for k, mask in enumerate(masks):
            self._blit_mask(mask, left + k * (gw + spacing), top, color)

    def _blit_mask(self, mask: np.ndarray, x: int, y: int, color: Color) -> None:
        mh, mw = mask.shape
        x0, y0 = max(0, x), max(0, y)
        x1, y1 = min(self.width, x + mw), min(self.height, y + mh)
        if x0 >= x1 or y0 >= y1:
            return
        sub = mask[y0 - y : y1 - y, x0 - x : x1 - x]
        self.px[y0:y1, x0:x1][sub] = color

    def text_extent(self, text: str, height: int) -> tuple[int, int]:
        gw = max(1, (height * GLYPH_COLS + GLYPH_ROWS // 2) // GLYPH_ROWS)
        spacing = max(1, (height + GLYPH_ROWS // 2) // GLYPH_ROWS)
        return (len(text) * gw + (len(text) - 1) * spacing if text else 0, height)


def new_canvas(width: int, height: int, fill: Color = WHITE) -> ImageCanvas:
    if width <= 0 or height <= 0:
        raise ValueError(f"canvas dimensions must be positive, got {width}x{height}")
    px = np.empty((height, width, 3), dtype=np.uint8)
    px[:] = fill
    return ImageCanvas(width, height, px)


def from_array(px: np.ndarray) -> ImageCanvas:
    if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
        raise ValueError(f"expected (h, w, 3) uint8 array, got {px.shape} {px.dtype}")
    return ImageCanvas(px.shape[1], px.shape[0], np.ascontiguousarray(px))
