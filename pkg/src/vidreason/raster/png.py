"""Minimal PNG codec for 8-bit RGB images.

The encoder always emits the same chunk layout (IHDR, optional pHYs, one
IDAT, IEND) with filter type 0 and a fixed zlib level, so a given canvas
encodes to the same bytes on every run. The decoder handles anything the
encoder produces plus the five standard scanline filters.
"""
from __future__ import annotations

import struct
import zlib

import numpy as np

from .canvas import ImageCanvas, from_array

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


class PngError(ValueError):
    """Malformed or unsupported PNG data."""


def _chunk(kind: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(kind)
    crc = zlib.crc32(payload, crc)
    return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", crc)


def encode_png(canvas: ImageCanvas, dpi: int | None = None) -> bytes:
    """Serialize a canvas as an 8-bit truecolor PNG. `dpi` adds a pHYs chunk
    as pure metadata; geometry stays pixel-defined."""
    h, w = canvas.height, canvas.width
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    raw = bytearray()
    px = canvas.px
    for y in range(h):
        raw.append(0)
        raw += px[y].tobytes()
    out = bytearray(_SIGNATURE)
    out += _chunk(b"IHDR", ihdr)
    if dpi is not None:
        ppm = int(dpi * 1000 / 25.4 + 0.5)
        out += _chunk(b"pHYs", struct.pack(">IIB", ppm, ppm, 1))
    out += _chunk(b"IDAT", zlib.compress(bytes(raw), _ZLIB_LEVEL))
    out += _chunk(b"IEND", b"")
    return bytes(out)


def _unfilter(kind: int, cur: bytearray, prev: bytes, bpp: int) -> None:
    n = len(cur)
    if kind == 0:
        return
    if kind == 1:  # Sub
        for i in range(bpp, n):
            cur[i] = (cur[i] + cur[i - bpp]) & 0xFF
    elif kind == 2:  # Up
        for i in range(n):
            cur[i] = (cur[i] + prev[i]) & 0xFF
    elif kind == 3:  # Average
        for i in range(n):
            left = cur[i - bpp] if i >= bpp else 0
            cur[i] = (cur[i] + ((left + prev[i]) >> 1)) & 0xFF
    elif kind == 4:  # Paeth
        for i in range(n):
            a = cur[i - bpp] if i >= bpp else 0
            b = prev[i]
            c = prev[i - bpp] if i >= bpp else 0
            p = a + b - c
            pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
            if pa <= pb and pa <= pc:
                pr = a
            elif pb <= pc:
                pr = b
            else:
                pr = c
            cur[i] = (cur[i] + pr) & 0xFF
    else:
        raise PngError(f"unknown scanline filter {kind}")


def decode_png(data: bytes) -> ImageCanvas:
    if len(data) < len(_SIGNATURE) or data[: len(_SIGNATURE)] != _SIGNATURE:
        raise PngError("missing PNG signature")
    pos = len(_SIGNATURE)
    width = height = None
    idat = bytearray()
    seen_end = False
    while pos < len(data):
        if pos + 8 > len(data):
            raise PngError(f"truncated chunk header at byte {pos}")
        (length,) = struct.unpack(">I", data[pos : pos + 4])
        kind = data[pos + 4 : pos + 8]
        body_end = pos + 8 + length
        if body_end + 4 > len(data):
            raise PngError(f"truncated {kind.decode('latin1')} chunk at byte {pos}")
        payload = data[pos + 8 : body_end]
        (crc,) = struct.unpack(">I", data[body_end : body_end + 4])
        if crc != zlib.crc32(payload, zlib.crc32(kind)):
            raise PngError(f"CRC mismatch in {kind.decode('latin1')} chunk at byte {pos}")
        if kind == b"IHDR":
            width, height, depth, color, comp, filt, interlace = struct.unpack(">IIBBBBB", payload)
            if depth != 8 or color != 2:
                raise PngError(f"unsupported format: bit depth {depth}, color type {color}")
            if comp or filt or interlace:
                raise PngError("unsupported compression/filter/interlace method")
        elif kind == b"IDAT":
            idat += payload
        elif kind == b"IEND":
            seen_end = True
            break
        pos = body_end + 4
    if width is None:
        raise PngError("no IHDR chunk")
    if not seen_end:
        raise PngError("no IEND chunk")
    if not idat:
        raise PngError("no IDAT data")
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as e:
        raise PngError(f"bad IDAT stream: {e}") from None
    stride = width * 3
    if len(raw) != (stride + 1) * height:
        raise PngError(f"pixel data length {len(raw)} != expected {(stride + 1) * height}")
    px = np.empty((height, width, 3), dtype=np.uint8)
    prev = bytes(stride)
    for y in range(height):
        off = y * (stride + 1)
        row = bytearray(raw[off + 1 : off + 1 + stride])
        _unfilter(raw[off], row, prev, 3)
        px[y] = np.frombuffer(bytes(row), dtype=np.uint8).reshape(width, 3)
        prev = bytes(row)
    return from_array(px)
