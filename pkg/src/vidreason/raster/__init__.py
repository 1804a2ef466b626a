"""Software rasterizer: canvas primitives, glyphs, 3D projection, PNG codec."""
from .camera import CameraPose, darker, project_point, render_faces
from .canvas import BLACK, WHITE, Color, ImageCanvas, from_array, new_canvas
from .glyphs import GlyphError
from .kernels import active_backend, diff_count, scale_nearest, use_backend
from .png import PngError, decode_png, encode_png

__all__ = [
    "BLACK",
    "WHITE",
    "CameraPose",
    "Color",
    "GlyphError",
    "ImageCanvas",
    "PngError",
    "active_backend",
    "darker",
    "decode_png",
    "diff_count",
    "encode_png",
    "from_array",
    "new_canvas",
    "project_point",
    "render_faces",
    "scale_nearest",
    "use_backend",
]
