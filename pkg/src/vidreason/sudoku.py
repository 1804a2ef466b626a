"""3x3 Latin-square Sudoku puzzles with exactly one blank cell.

The solution space is the complete catalog of the 12 order-3 Latin squares;
a puzzle is one catalog entry plus one removed digit, so the answer is
always forced by its row and column.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .raster import BLACK, ImageCanvas, new_canvas
from .task import TaskUnit, make_task_id

CANVAS_W = 480
CANVAS_H = 480
CELL = 110
GRID_LINE = 4
DIGIT_HEIGHT = 32  # the "24pt bold" of the rendering style, fixed in pixels
BLANK_GRAY = (230, 230, 230)

PROMPT = (
    "Fill the gray cell with the missing digit so that every row and every "
    "column contains the digits 1, 2 and 3 exactly once. Write the digit "
    "into the empty cell; change nothing else."
)


def _is_latin(grid: tuple[tuple[int, ...], ...]) -> bool:
    for i in range(3):
        if sorted(grid[i]) != [1, 2, 3]:
            return False
        if sorted(row[i] for row in grid) != [1, 2, 3]:
            return False
    return True


def enumerate_latin3() -> list[tuple[tuple[int, ...], ...]]:
    """All order-3 Latin squares, canonically sorted. There are exactly 12."""
    out = []
    for cells in itertools.product((1, 2, 3), repeat=9):
        grid = (cells[0:3], cells[3:6], cells[6:9])
        if _is_latin(grid):
            out.append(grid)
    out.sort()
    return out


_CATALOG = enumerate_latin3()


@dataclass(frozen=True)
class SudokuSpec:
    solution: tuple[tuple[int, ...], ...]
    blank: tuple[int, int]
    answer: int

    def __post_init__(self):
        if not _is_latin(self.solution):
            raise ValueError("solution is not a Latin square")
        r, c = self.blank
        if self.answer != self.solution[r][c]:
            raise ValueError("answer does not match the solution at the blank cell")


def gen_sudoku(seed: int, index: int = 0) -> SudokuSpec:
    """Pick a (solution, blank) pair from the 108-entry product.

    The pair index walks the product deterministically, so 108 consecutive
    seeds cover every combination exactly once.
    """
    k = (seed + index) % (len(_CATALOG) * 9)
    solution = _CATALOG[k // 9]
    blank = ((k % 9) // 3, (k % 9) % 3)
    return SudokuSpec(solution=solution, blank=blank, answer=solution[blank[0]][blank[1]])


def render_sudoku(spec: SudokuSpec, show_blank: bool) -> ImageCanvas:
    canvas = new_canvas(CANVAS_W, CANVAS_H)
    size = 3 * CELL
    x0 = (CANVAS_W - size) // 2
    y0 = (CANVAS_H - size) // 2
    if show_blank:
        br, bc = spec.blank
        canvas.fill_rect(x0 + bc * CELL, y0 + br * CELL, CELL, CELL, BLANK_GRAY)
    for i in range(4):
        w = GRID_LINE + 2 if i in (0, 3) else GRID_LINE
        canvas.fill_rect(x0 + i * CELL - w // 2, y0 - w // 2, w, size + w, BLACK)
        canvas.fill_rect(x0 - w // 2, y0 + i * CELL - w // 2, size + w, w, BLACK)
    for r in range(3):
        for c in range(3):
            if show_blank and (r, c) == spec.blank:
                continue
            center = (x0 + c * CELL + CELL // 2, y0 + r * CELL + CELL // 2)
            canvas.draw_text(str(spec.solution[r][c]), center, DIGIT_HEIGHT, BLACK)
    return canvas


def make_sudoku_task(spec: SudokuSpec, seed: int, index: int = 0) -> TaskUnit:
    return TaskUnit(
        id=make_task_id("sudoku", seed, index),
        domain="sudoku",
        first_frame=render_sudoku(spec, show_blank=True),
        final_frame=render_sudoku(spec, show_blank=False),
        prompt=PROMPT,
        ground_truth={
            "solution": [list(row) for row in spec.solution],
            "blank": list(spec.blank),
            "answer": spec.answer,
        },
        seed=seed,
    )
