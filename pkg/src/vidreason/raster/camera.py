"""Look-at perspective projection and painter's-algorithm face rendering."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .canvas import Color, ImageCanvas

_FOV_DEG = 60.0
# Projected coordinates are snapped to a 2^-20 px grid so sub-ulp libm
# differences can never flip a rasterized pixel.
_QUANT = 2.0 ** 20


@dataclass(frozen=True)
class CameraPose:
    """Camera on a sphere around the scene origin, +z up.

    elevation_deg must lie in [0, 90); azimuth_deg is normalized to [0, 360).
    """

    elevation_deg: float
    azimuth_deg: float
    distance: float

    def __post_init__(self):
        if not 0.0 <= self.elevation_deg < 90.0:
            raise ValueError(f"elevation {self.elevation_deg} outside [0, 90)")
        if self.distance <= 0:
            raise ValueError(f"distance must be positive, got {self.distance}")
        object.__setattr__(self, "azimuth_deg", self.azimuth_deg % 360.0)

    def eye(self) -> tuple[float, float, float]:
        el = math.radians(self.elevation_deg)
        az = math.radians(self.azimuth_deg)
        return (
            self.distance * math.cos(el) * math.cos(az),
            self.distance * math.cos(el) * math.sin(az),
            self.distance * math.sin(el),
        )


def _basis(cam: CameraPose):
    ex, ey, ez = cam.eye()
    d = cam.distance
    fx, fy, fz = -ex / d, -ey / d, -ez / d  # unit forward, toward origin
    # right = normalize(forward x up0) with up0 = +z
    rx, ry = fy, -fx
    rn = math.hypot(rx, ry)
    rx, ry = rx / rn, ry / rn
    # up = right x forward
    ux = ry * fz
    uy = -rx * fz
    uz = rx * fy - ry * fx
    return (ex, ey, ez), (rx, ry, 0.0), (ux, uy, uz), (fx, fy, fz)


def project_point(p, cam: CameraPose, viewport: tuple[int, int]) -> tuple[float, float]:
    """Project a 3D point to viewport pixels; equal x/y scale, y grows down.

    The camera must be outside the scene; a point at or behind the camera
    plane raises ValueError.
    """
    (ex, ey, ez), (rx, ry, rz), (ux, uy, uz), (fx, fy, fz) = _basis(cam)
    vx, vy, vz = p[0] - ex, p[1] - ey, p[2] - ez
    xc = vx * rx + vy * ry + vz * rz
    yc = vx * ux + vy * uy + vz * uz
    zc = vx * fx + vy * fy + vz * fz
    if zc <= 1e-9:
        raise ValueError(f"point {tuple(p)} is behind the camera")
    w, h = viewport
    focal = (min(w, h) / 2.0) / math.tan(math.radians(_FOV_DEG) / 2.0)
    sx = w / 2.0 + focal * xc / zc
    sy = h / 2.0 - focal * yc / zc
    return (round(sx * _QUANT) / _QUANT, round(sy * _QUANT) / _QUANT)


def _polygon_area(quad) -> float:
    s = 0.0
    for (x0, y0), (x1, y1) in zip(quad, quad[1:] + quad[:1]):
        s += x0 * y1 - x1 * y0
    return s / 2.0


def darker(color: Color) -> Color:
    return (color[0] // 2, color[1] // 2, color[2] // 2)


def render_faces(faces, canvas: ImageCanvas) -> ImageCanvas:
    """Paint (quad, depth_key, color) faces far-to-near with stroked edges.

    Quads are already-projected 2D point lists. Ties in depth are broken by
    input order (stable); degenerate quads are skipped.
    """
    order = sorted(range(len(faces)), key=lambda i: (-faces[i][1], i))
    for i in order:
        quad, _, color = faces[i]
        if abs(_polygon_area(quad)) < 1e-12:
            continue
        canvas.fill_polygon(quad, color)
        edge = darker(color)
        pts = [(int(round(x)), int(round(y))) for x, y in quad]
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            canvas.draw_line(x0, y0, x1, y1, edge)
    return canvas
