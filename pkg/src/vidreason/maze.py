"""3x3 grid mazes: Kruskal spanning trees, unique-path solving, rendering.

The passage graph of every maze is a spanning tree of the 3x3 lattice, so
any two cells are joined by exactly one simple path.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .raster import BLACK, ImageCanvas, new_canvas
from .rng import Rng
from .task import TaskUnit, make_task_id

ROWS = COLS = 3
CANVAS_W = 832
CANVAS_H = 480
DPI = 100
CELL = 120
WALL_T = 6
MARKER_RADIUS = 34
GREEN = (34, 160, 44)
RED = (214, 40, 40)
POLE = (80, 60, 40)

PROMPT = (
    "Move the green dot through the corridors of the maze until it reaches "
    "the red flag, then keep it at the flag. The dot may only travel along "
    "open corridors and must never cross a wall."
)

Cell = tuple[int, int]
Edge = tuple[Cell, Cell]


def lattice_edges() -> list[Edge]:
    """The 12 interior cell-pair edges, in fixed enumeration order."""
    edges: list[Edge] = []
    for r in range(ROWS):
        for c in range(COLS - 1):
            edges.append(((r, c), (r, c + 1)))
    for r in range(ROWS - 1):
        for c in range(COLS):
            edges.append(((r, c), (r + 1, c)))
    return edges


EDGES = lattice_edges()


@dataclass(frozen=True)
class MazeSpec:
    rows: int
    cols: int
    walls: frozenset[Edge]
    start: Cell
    goal: Cell
    solution: tuple[Cell, ...]

    def passages(self) -> set[Edge]:
        return {e for e in EDGES if e not in self.walls}


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _cell_index(cell: Cell) -> int:
    return cell[0] * COLS + cell[1]


def gen_maze(seed: int, index: int = 0) -> MazeSpec:
    """Random weights on the 12 lattice edges, Kruskal's MST, seeded start/goal."""
    rng = Rng(seed, "maze", index)
    weighted = [(rng.random(), i) for i, _ in enumerate(EDGES)]
    weighted.sort()  # ties (never in practice) fall back to enumeration order
    uf = _UnionFind(ROWS * COLS)
    tree: set[Edge] = set()
    for _, i in weighted:
        a, b = EDGES[i]
        if uf.union(_cell_index(a), _cell_index(b)):
            tree.add(EDGES[i])
    walls = frozenset(e for e in EDGES if e not in tree)
    cells = [(r, c) for r in range(ROWS) for c in range(COLS)]
    while True:
        start = rng.choice(cells)
        goal = rng.choice(cells)
        if start == goal:
            continue
        path = _bfs_path(walls, start, goal)
        if len(path) >= 3:  # skip one-step tasks
            break
    return MazeSpec(ROWS, COLS, walls, start, goal, tuple(path))


def _neighbors(walls: frozenset[Edge], cell: Cell):
    r, c = cell
    for nb in ((r, c - 1), (r, c + 1), (r - 1, c), (r + 1, c)):
        if not (0 <= nb[0] < ROWS and 0 <= nb[1] < COLS):
            continue
        edge = (cell, nb) if cell < nb else (nb, cell)
        if edge not in walls:
            yield nb


def _bfs_path(walls: frozenset[Edge], start: Cell, goal: Cell) -> list[Cell]:
    prev: dict[Cell, Cell] = {start: start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = [cur]
            while cur != start:
                cur = prev[cur]
                path.append(cur)
            return path[::-1]
        for nb in _neighbors(walls, cur):
            if nb not in prev:
                prev[nb] = cur
                queue.append(nb)
    raise ValueError(f"maze is disconnected: no path {start} -> {goal}")


def solve_maze(spec: MazeSpec) -> list[Cell]:
    """Unique start->goal path. The passage graph must be a spanning tree."""
    if len(spec.passages()) != ROWS * COLS - 1:
        raise ValueError(f"passage set has {len(spec.passages())} edges, expected {ROWS * COLS - 1}")
    return _bfs_path(spec.walls, spec.start, spec.goal)


def _cell_center(origin: tuple[int, int], cell: Cell) -> tuple[int, int]:
    return (origin[0] + cell[1] * CELL + CELL // 2, origin[1] + cell[0] * CELL + CELL // 2)


def render_maze(spec: MazeSpec, marker_at: Cell, trail: tuple[Cell, ...] = ()) -> ImageCanvas:
    canvas = new_canvas(CANVAS_W, CANVAS_H)
    size = 3 * CELL
    x0 = (CANVAS_W - size) // 2
    y0 = (CANVAS_H - size) // 2
    # trail under everything else
    if len(trail) >= 2:
        for a, b in zip(trail, trail[1:]):
            ax, ay = _cell_center((x0, y0), a)
            bx, by = _cell_center((x0, y0), b)
            lx, hx = min(ax, bx), max(ax, bx)
            ly, hy = min(ay, by), max(ay, by)
            canvas.fill_rect(lx - 5, ly - 5, hx - lx + 10, hy - ly + 10, GREEN)
    # outer border
    t = WALL_T
    canvas.fill_rect(x0 - t // 2, y0 - t // 2, size + t, t, BLACK)
    canvas.fill_rect(x0 - t // 2, y0 + size - t // 2, size + t, t, BLACK)
    canvas.fill_rect(x0 - t // 2, y0 - t // 2, t, size + t, BLACK)
    canvas.fill_rect(x0 + size - t // 2, y0 - t // 2, t, size + t, BLACK)
    # interior walls
    for (a, b) in sorted(spec.walls):
        if a[0] == b[0]:  # horizontal neighbors -> vertical wall between them
            x = x0 + max(a[1], b[1]) * CELL
            y = y0 + a[0] * CELL
            canvas.fill_rect(x - t // 2, y - t // 2, t, CELL + t, BLACK)
        else:  # vertical neighbors -> horizontal wall
            x = x0 + a[1] * CELL
            y = y0 + max(a[0], b[0]) * CELL
            canvas.fill_rect(x - t // 2, y - t // 2, CELL + t, t, BLACK)
    # marker
    mx, my = _cell_center((x0, y0), marker_at)
    canvas.fill_circle(mx, my, MARKER_RADIUS, GREEN)
    # goal flag, always on top so it is identical in both frames
    gx, gy = _cell_center((x0, y0), spec.goal)
    canvas.fill_rect(gx - 2, gy - 46, 5, 80, POLE)
    canvas.fill_polygon([(gx + 3, gy - 46), (gx + 45, gy - 32), (gx + 3, gy - 18)], RED)
    return canvas


def make_maze_task(spec: MazeSpec, seed: int, index: int = 0) -> TaskUnit:
    return TaskUnit(
        id=make_task_id("maze", seed, index),
        domain="maze",
        first_frame=render_maze(spec, marker_at=spec.start),
        final_frame=render_maze(spec, marker_at=spec.goal, trail=spec.solution),
        prompt=PROMPT,
        ground_truth={
            "walls": [[list(a), list(b)] for a, b in sorted(spec.walls)],
            "start": list(spec.start),
            "goal": list(spec.goal),
            "solution": [list(c) for c in spec.solution],
        },
        seed=seed,
        dpi=DPI,
    )
