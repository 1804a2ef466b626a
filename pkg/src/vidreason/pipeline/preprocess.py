"""Image preprocessing: scale-preserving letterboxing and payload encoding."""
from __future__ import annotations

import base64

from ..raster import ImageCanvas, encode_png, new_canvas, scale_nearest

PAD_GRAY = (128, 128, 128)
ALLOWED_MIME = ("image/jpeg", "image/png", "image/webp")


class PayloadError(ValueError):
    """Unsupported payload encoding or MIME type."""


def letterbox(image: ImageCanvas, target: tuple[int, int], pad=PAD_GRAY) -> ImageCanvas:
    """Fit `image` inside `target` preserving aspect ratio, center it, and
    pad with a constant color. Nearest-neighbor sampling keeps the result
    bit-exact; an odd pad gives the extra pixel to the right/bottom."""
    tw, th = target
    if tw <= 0 or th <= 0:
        raise ValueError(f"non-positive target {target}")
    w, h = image.width, image.height
    if (w, h) == (tw, th):
        return image.clone()
    # scale = min(tw/w, th/h), applied with integer rounding on the free axis
    if tw * h <= th * w:  # width is the binding constraint
        sw = tw
        sh = min(th, max(1, (h * tw * 2 + w) // (2 * w)))
    else:
        sh = th
        sw = min(tw, max(1, (w * th * 2 + h) // (2 * h)))
    scaled = scale_nearest(image.px, sh, sw)
    out = new_canvas(tw, th, pad)
    x0 = (tw - sw) // 2
    y0 = (th - sh) // 2
    out.px[y0 : y0 + sh, x0 : x0 + sw] = scaled
    return out


def encode_image_payload(image: ImageCanvas, encoding: str, mime: str = "image/png") -> dict:
    """PNG-serialize a frame for a request body.

    Returns {"mime", "data_base64"} for base64-inline or {"mime", "data"}
    (raw bytes) for multipart. Only the three whitelisted MIME types pass
    validation; this codebase always sends image/png.
    """
    if mime not in ALLOWED_MIME:
        raise PayloadError(f"MIME {mime!r} not allowed; expected one of {ALLOWED_MIME}")
    if mime != "image/png":
        raise PayloadError(f"only image/png payloads can be produced here, got {mime!r}")
    png = encode_png(image)
    if encoding == "base64-inline":
        return {"mime": mime, "data_base64": base64.b64encode(png).decode("ascii")}
    if encoding == "multipart":
        return {"mime": mime, "data": png}
    if encoding == "local":
        raise PayloadError("encoding 'local' is reserved for in-process models and has no payload")
    raise PayloadError(f"unknown encoding {encoding!r}")


def decode_image_payload(payload: dict) -> ImageCanvas:
    from ..raster import decode_png

    if "data_base64" in payload:
        raw = base64.b64decode(payload["data_base64"])
    else:
        raw = payload["data"]
    return decode_png(raw)


__all__ = [
    "ALLOWED_MIME",
    "PAD_GRAY",
    "PayloadError",
    "decode_image_payload",
    "encode_image_payload",
    "letterbox",
]
