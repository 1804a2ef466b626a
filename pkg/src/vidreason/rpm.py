"""Raven's-matrix style 3x3 pattern puzzles with verified unique answers.

Rows progress left to right under the active rules; attributes no rule
touches stay constant within a row. The bottom-right cell is withheld and
its uniqueness is confirmed by scanning the full 108-candidate attribute
space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .raster import ImageCanvas, new_canvas
from .rng import Rng
from .task import TaskUnit, make_task_id

TILE = 150
MATRIX = TILE * 3  # 450x450 canvas

SHAPES = ("triangle", "square", "circle")
COUNTS = (1, 2, 3)
ROTATIONS = (0, 90, 180, 270)
COLOR_NAMES = ("red", "blue", "green")
COLOR_RGB = {"red": (220, 50, 47), "blue": (38, 110, 210), "green": (40, 160, 70)}

BASE_RULES = ("shape_prog", "number_prog", "rotation_prog", "color_seq")
RULES = BASE_RULES + ("combination",)

GRID_LINE = (120, 120, 120)

PROMPT = (
    "Complete the 3x3 matrix: the empty bottom-right cell must be filled "
    "with the tile that continues the pattern of its row. Draw the missing "
    "tile; leave the other eight tiles unchanged."
)


@dataclass(frozen=True)
class CellAttrs:
    shape: str
    count: int
    rotation: int
    color: str

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"bad shape {self.shape!r}")
        if self.count not in COUNTS:
            raise ValueError(f"bad count {self.count}")
        if self.rotation not in ROTATIONS:
            raise ValueError(f"bad rotation {self.rotation}")
        if self.color not in COLOR_NAMES:
            raise ValueError(f"bad color {self.color!r}")

    def as_dict(self) -> dict:
        return {"shape": self.shape, "count": self.count, "rotation": self.rotation, "color": self.color}


def all_attr_candidates() -> list[CellAttrs]:
    """The full attribute domain: 3 shapes x 3 counts x 4 rotations x 3 colors."""
    return [
        CellAttrs(s, n, r, c)
        for s in SHAPES
        for n in COUNTS
        for r in ROTATIONS
        for c in COLOR_NAMES
    ]


# which attribute each rule governs
RULE_ATTR = {
    "shape_prog": "shape",
    "number_prog": "count",
    "rotation_prog": "rotation",
    "color_seq": "color",
}


def apply_rule(attrs: CellAttrs, rule: str, step: int) -> CellAttrs:
    """Advance one attribute of `attrs` by `step` positions of its cycle."""
    if step not in (0, 1, 2):
        raise ValueError(f"step must be 0, 1 or 2, got {step}")
    if rule == "shape_prog":
        return CellAttrs(SHAPES[(SHAPES.index(attrs.shape) + step) % 3], attrs.count, attrs.rotation, attrs.color)
    if rule == "number_prog":
        return CellAttrs(attrs.shape, 1 + (attrs.count - 1 + step) % 3, attrs.rotation, attrs.color)
    if rule == "rotation_prog":
        return CellAttrs(attrs.shape, attrs.count, (attrs.rotation + 90 * step) % 360, attrs.color)
    if rule == "color_seq":
        return CellAttrs(attrs.shape, attrs.count, attrs.rotation, COLOR_NAMES[(COLOR_NAMES.index(attrs.color) + step) % 3])
    raise ValueError(f"unknown rule {rule!r}")


def _progress(initial: CellAttrs, rules: list[str], step: int) -> CellAttrs:
    cur = initial
    for rule in rules:
        cur = apply_rule(cur, rule, step)
    return cur


@dataclass(frozen=True)
class RpmSpec:
    rules: tuple[str, ...]
    grid: tuple[tuple[CellAttrs, ...], ...]
    answer: CellAttrs

    def __post_init__(self):
        if not self.rules:
            raise ValueError("rule list must be non-empty")
        if self.answer != self.grid[2][2]:
            raise ValueError("answer must equal the bottom-right grid cell")


def candidate_completes(spec_rules, row: tuple[CellAttrs, ...], cand: CellAttrs) -> bool:
    """True iff `cand` is a valid third cell for `row` under the rules:
    governed attributes follow their progression from the row's first cell,
    all other attributes stay constant."""
    governed = {RULE_ATTR[r] for r in spec_rules}
    expected = _progress(row[0], list(spec_rules), 2)
    for attr in ("shape", "count", "rotation", "color"):
        want = getattr(expected, attr) if attr in governed else getattr(row[0], attr)
        if getattr(cand, attr) != want:
            return False
    return True


def gen_rpm(rule_selection, seed: int, index: int = 0) -> RpmSpec:
    """Build a grid for the requested rules and verify answer uniqueness.

    "combination" expands to two distinct simultaneous base rules. Ambiguous
    grids (more or fewer than one valid completion among the 108 candidates)
    are discarded and resampled.
    """
    selection = list(rule_selection)
    if not selection:
        raise ValueError("rule selection must be non-empty")
    for r in selection:
        if r not in RULES:
            raise ValueError(f"unknown rule {r!r}")
    rng = Rng(seed, "rpm", index)
    rules: list[str] = []
    for r in selection:
        if r == "combination":
            pool = [b for b in BASE_RULES if b not in rules]
            for _ in range(2):
                pick = rng.choice(pool)
                pool.remove(pick)
                rules.append(pick)
        elif r not in rules:
            rules.append(r)
    candidates = all_attr_candidates()
    for _ in range(100):
        rows = []
        for _ in range(3):
            initial = CellAttrs(
                shape=rng.choice(SHAPES),
                count=rng.choice(COUNTS),
                rotation=rng.choice(ROTATIONS),
                color=rng.choice(COLOR_NAMES),
            )
            if "rotation_prog" in rules and "shape_prog" not in rules and initial.shape == "circle":
                # rotation is invisible on circles; keep the row detectable
                initial = CellAttrs(rng.choice(("triangle", "square")), initial.count, initial.rotation, initial.color)
            rows.append(tuple(_progress(initial, rules, step) for step in range(3)))
        grid = tuple(rows)
        answer = grid[2][2]
        valid = [c for c in candidates if candidate_completes(rules, grid[2], c)]
        if len(valid) == 1 and valid[0] == answer:
            return RpmSpec(rules=tuple(rules), grid=grid, answer=answer)
    raise RuntimeError("could not build an unambiguous matrix after 100 attempts")


# sizes keep the smallest rendered attrs (triangles) above ~1.5% of the
# canvas, comfortably past the oracle judge's 1% diff tolerance
_COUNT_LAYOUT = {
    1: ((75, 75, 70),),
    2: ((48, 48, 52), (102, 102, 52)),
    3: ((75, 40, 44), (42, 108, 44), (108, 108, 44)),
}


def _shape_points(shape: str, cx: float, cy: float, size: float, rotation: int):
    rad = math.radians(rotation)

    def rot(px: float, py: float):
        dx, dy = px - cx, py - cy
        return (cx + dx * math.cos(rad) - dy * math.sin(rad), cy + dx * math.sin(rad) + dy * math.cos(rad))

    if shape == "square":
        h = size / 2
        return [rot(cx - h, cy - h), rot(cx + h, cy - h), rot(cx + h, cy + h), rot(cx - h, cy + h)]
    if shape == "triangle":
        pts = []
        for ang in (-90, 30, 150):  # apex up at rotation 0
            a = math.radians(ang)
            pts.append(rot(cx + size * 0.72 * math.cos(a), cy + size * 0.72 * math.sin(a)))
        return pts
    raise ValueError(shape)


def _draw_cell(canvas: ImageCanvas, ox: int, oy: int, attrs: CellAttrs) -> None:
    color = COLOR_RGB[attrs.color]
    for cx, cy, size in _COUNT_LAYOUT[attrs.count]:
        if attrs.shape == "circle":
            canvas.fill_circle(ox + cx, oy + cy, int(size / 2), color)
        else:
            canvas.fill_polygon(_shape_points(attrs.shape, ox + cx, oy + cy, size, attrs.rotation), color)


def render_rpm(spec: RpmSpec, with_answer: bool) -> ImageCanvas:
    canvas = new_canvas(MATRIX, MATRIX)
    for i in range(4):
        x = min(i * TILE, MATRIX - 2)
        canvas.fill_rect(x, 0, 2, MATRIX, GRID_LINE)
        canvas.fill_rect(0, x, MATRIX, 2, GRID_LINE)
    for r in range(3):
        for c in range(3):
            if (r, c) == (2, 2) and not with_answer:
                continue  # withheld cell stays an empty outlined tile
            _draw_cell(canvas, c * TILE, r * TILE, spec.grid[r][c])
    return canvas


def make_rpm_task(spec: RpmSpec, seed: int, index: int = 0) -> TaskUnit:
    return TaskUnit(
        id=make_task_id("rpm", seed, index),
        domain="rpm",
        first_frame=render_rpm(spec, with_answer=False),
        final_frame=render_rpm(spec, with_answer=True),
        prompt=PROMPT,
        ground_truth={
            "rules": list(spec.rules),
            "grid": [[cell.as_dict() for cell in row] for row in spec.grid],
            "answer": spec.answer.as_dict(),
        },
        seed=seed,
    )
