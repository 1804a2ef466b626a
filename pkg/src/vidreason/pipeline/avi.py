"""Uncompressed 24-bit RGB AVI writer/reader.

The mock backend emits this container and the frame extractor parses it
natively, so end-to-end tests never shell out to an external decoder.
Frames are stored as standard bottom-up BGR rows padded to 4 bytes.
"""
from __future__ import annotations

import struct

import numpy as np


class AviError(ValueError):
    """Malformed or unsupported AVI data."""


def _pad_stride(width: int) -> int:
    return (width * 3 + 3) & ~3


def _frame_bytes(frame: np.ndarray) -> bytes:
    h, w = frame.shape[0], frame.shape[1]
    stride = _pad_stride(w)
    row_pad = b"\x00" * (stride - w * 3)
    rows = []
    for y in range(h - 1, -1, -1):  # bottom-up
        rows.append(frame[y, :, ::-1].tobytes() + row_pad)  # RGB -> BGR
    return b"".join(rows)


def write_avi(frames: list[np.ndarray], fps: int = 1) -> bytes:
    if not frames:
        raise AviError("cannot write an AVI with zero frames")
    h, w = frames[0].shape[0], frames[0].shape[1]
    for f in frames:
        if f.shape != frames[0].shape or f.dtype != np.uint8:
            raise AviError("all frames must share one (h, w, 3) uint8 shape")
    stride = _pad_stride(w)
    frame_size = stride * h

    avih = struct.pack(
        "<IIIIIIIIII4I",
        1_000_000 // fps,  # microseconds per frame
        frame_size * fps,  # max bytes per second
        0,
        0x10,  # AVIF_HASINDEX
        len(frames),
        0,
        1,  # one stream
        frame_size,
        w,
        h,
        0, 0, 0, 0,
    )
    strh = struct.pack(
        "<4s4sIHHIIIIIIIi4h",
        b"vids",
        b"DIB ",
        0, 0, 0, 0,
        1,  # scale
        fps,  # rate
        0,
        len(frames),
        frame_size,
        0xFFFFFFFF,
        0,
        0, 0, w, h,
    )
    strf = struct.pack("<IiiHHIIiiII", 40, w, h, 1, 24, 0, frame_size, 0, 0, 0, 0)

    def chunk(fourcc: bytes, payload: bytes) -> bytes:
        pad = b"\x00" if len(payload) % 2 else b""
        return fourcc + struct.pack("<I", len(payload)) + payload + pad

    def list_chunk(kind: bytes, payload: bytes) -> bytes:
        return chunk(b"LIST", kind + payload)

    hdrl = list_chunk(b"hdrl", chunk(b"avih", avih) + list_chunk(b"strl", chunk(b"strh", strh) + chunk(b"strf", strf)))

    movi_payload = bytearray()
    index = bytearray()
    for f in frames:
        offset = 4 + len(movi_payload)  # from the start of the 'movi' fourcc
        data = _frame_bytes(f)
        movi_payload += chunk(b"00db", data)
        index += struct.pack("<4sIII", b"00db", 0x10, offset, len(data))
    movi = list_chunk(b"movi", bytes(movi_payload))
    idx1 = chunk(b"idx1", bytes(index))

    body = b"AVI " + hdrl + movi + idx1
    return b"RIFF" + struct.pack("<I", len(body)) + body


def _iter_chunks(data: bytes, start: int, end: int):
    pos = start
    while pos + 8 <= end:
        fourcc = data[pos : pos + 4]
        (size,) = struct.unpack("<I", data[pos + 4 : pos + 8])
        payload_start = pos + 8
        payload_end = payload_start + size
        if payload_end > end:
            raise AviError(f"truncated chunk {fourcc!r} at byte {pos}")
        yield fourcc, payload_start, payload_end
        pos = payload_end + (size & 1)


def read_avi(data: bytes) -> tuple[list[np.ndarray], float]:
    """Decode an uncompressed RGB AVI into frames plus frames-per-second."""
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"AVI ":
        raise AviError("not a RIFF/AVI file")
    (riff_size,) = struct.unpack("<I", data[4:8])
    if len(data) < riff_size + 8:
        raise AviError(f"truncated AVI: header claims {riff_size + 8} bytes, got {len(data)}")
    width = height = None
    rate, scale = 1, 1
    frame_payloads: list[bytes] = []

    def walk(start: int, end: int):
        nonlocal width, height, rate, scale
        for fourcc, ps, pe in _iter_chunks(data, start, end):
            if fourcc == b"LIST":
                walk(ps + 4, pe)
            elif fourcc == b"strh":
                fcc_type, _handler, _f, _p, _l, _init, sc, rt = struct.unpack("<4s4sIHHIII", data[ps : ps + 28])
                if fcc_type == b"vids":
                    scale, rate = max(1, sc), max(1, rt)
            elif fourcc == b"strf" and width is None:
                _size, w, h, _planes, bits, comp = struct.unpack("<IiiHHI", data[ps : ps + 20])
                if bits != 24 or comp != 0:
                    raise AviError(f"unsupported video format: {bits}-bit, compression {comp}")
                width, height = w, abs(h)
            elif fourcc in (b"00db", b"00dc"):
                frame_payloads.append(data[ps:pe])

    walk(12, 12 + struct.unpack("<I", data[4:8])[0] - 4)
    if width is None or height is None:
        raise AviError("no video stream format found")
    if not frame_payloads:
        raise AviError("no video frames found")
    stride = _pad_stride(width)
    frames = []
    for i, payload in enumerate(frame_payloads):
        if len(payload) != stride * height:
            raise AviError(f"frame {i} has {len(payload)} bytes, expected {stride * height}")
        rows = np.frombuffer(payload, dtype=np.uint8).reshape(height, stride)[:, : width * 3]
        rgb = rows.reshape(height, width, 3)[::-1, :, ::-1]  # bottom-up BGR -> top-down RGB
        frames.append(np.ascontiguousarray(rgb))
    return frames, rate / scale
