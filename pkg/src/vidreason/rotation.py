"""Voxel-snake structures and 180-degree mental-rotation task rendering.

Structures are grown as axis-aligned segments with occasional branches,
then accepted only if they are connected, span all three axes, respect the
adjacency-degree cap, and are not congruent to their own half-turn about
the vertical axis (which would make the two viewpoints indistinguishable).
"""
from __future__ import annotations

from dataclasses import dataclass

from .raster import CameraPose, ImageCanvas, new_canvas, project_point, render_faces
from .rng import Rng
from .task import TaskUnit, make_task_id

FRAME_W = FRAME_H = 400
FACE_COLOR = (0x70, 0x70, 0xB0)

PROMPT = (
    "Rotate the camera smoothly around the block structure by exactly 180 "
    "degrees horizontally, keeping the same camera tilt and distance, so "
    "the structure is finally seen from the opposite side."
)

Coord = tuple[int, int, int]
DIRS: tuple[Coord, ...] = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))


class GenerationError(RuntimeError):
    """Retry budget exhausted; indicates a parameter bug."""


@dataclass(frozen=True)
class SnakeParams:
    n_cubes: int
    l_min: int = 2
    l_max: int = 5
    p_branch: float = 0.2
    max_degree: int = 3

    def __post_init__(self):
        if not 8 <= self.n_cubes <= 9:
            raise ValueError(f"n_cubes must be 8 or 9, got {self.n_cubes}")
        if not 2 <= self.l_min <= self.l_max <= 5:
            raise ValueError(f"bad segment lengths [{self.l_min}, {self.l_max}]")
        if not 0.0 <= self.p_branch <= 1.0:
            raise ValueError(f"bad branch probability {self.p_branch}")
        if self.max_degree < 1:
            raise ValueError(f"bad max_degree {self.max_degree}")


@dataclass(frozen=True)
class VoxelStructure:
    cubes: frozenset[Coord]

    def sorted_cubes(self) -> list[Coord]:
        return sorted(self.cubes)


def _add(a: Coord, b: Coord) -> Coord:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def degree(cubes: set[Coord], c: Coord) -> int:
    return sum(1 for d in DIRS if _add(c, d) in cubes)


def _can_place(cubes: set[Coord], nxt: Coord, max_degree: int) -> bool:
    if nxt in cubes:
        return False
    neighbors = [n for n in (_add(nxt, d) for d in DIRS) if n in cubes]
    if len(neighbors) > max_degree:
        return False
    return all(degree(cubes, n) < max_degree for n in neighbors)


def is_connected(cubes: frozenset[Coord]) -> bool:
    if not cubes:
        return False
    seen = {next(iter(sorted(cubes)))}
    frontier = list(seen)
    while frontier:
        cur = frontier.pop()
        for d in DIRS:
            nb = _add(cur, d)
            if nb in cubes and nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return len(seen) == len(cubes)


def spans_all_axes(cubes: frozenset[Coord]) -> bool:
    for axis in range(3):
        values = {c[axis] for c in cubes}
        if len(values) < 2:
            return False
    return True


def canonical_form(cubes) -> tuple[Coord, ...]:
    xs = min(c[0] for c in cubes)
    ys = min(c[1] for c in cubes)
    zs = min(c[2] for c in cubes)
    return tuple(sorted((c[0] - xs, c[1] - ys, c[2] - zs) for c in cubes))


def is_rotation_ambiguous(s: VoxelStructure) -> bool:
    """True iff the structure equals its own 180-degree turn about z."""
    rotated = [(-x, -y, z) for (x, y, z) in s.cubes]
    return canonical_form(rotated) == canonical_form(s.cubes)


def _grow_once(params: SnakeParams, rng: Rng) -> set[Coord] | None:
    cubes: set[Coord] = {(0, 0, 0)}
    cur: Coord = (0, 0, 0)
    direction = rng.choice(DIRS)
    for _ in range(64):  # segment budget per attempt
        seg_len = rng.randint(params.l_min, params.l_max)
        for _ in range(seg_len):
            nxt = _add(cur, direction)
            if not _can_place(cubes, nxt, params.max_degree):
                break
            cubes.add(nxt)
            cur = nxt
            if len(cubes) == params.n_cubes:
                return cubes
        if rng.random() < params.p_branch:
            junctions = [c for c in sorted(cubes) if degree(cubes, c) < params.max_degree]
            if junctions:
                cur = rng.choice(junctions)
        turns = [d for d in DIRS if d != direction and d != (-direction[0], -direction[1], -direction[2])
                 and _can_place(cubes, _add(cur, d), params.max_degree)]
        if not turns:
            open_cubes = [c for c in sorted(cubes)
                          if any(_can_place(cubes, _add(c, d), params.max_degree) for d in DIRS)]
            if not open_cubes:
                return None
            cur = rng.choice(open_cubes)
            turns = [d for d in DIRS if _can_place(cubes, _add(cur, d), params.max_degree)]
        direction = rng.choice(turns)
    return None


def structure_errors(s: VoxelStructure, params: SnakeParams) -> list[str]:
    errs = []
    if len(s.cubes) != params.n_cubes:
        errs.append(f"cube count {len(s.cubes)} != {params.n_cubes}")
    if not is_connected(s.cubes):
        errs.append("not face-connected")
    if not spans_all_axes(s.cubes):
        errs.append("does not span all three axes")
    worst = max((degree(set(s.cubes), c) for c in s.cubes), default=0)
    if worst > params.max_degree:
        errs.append(f"degree {worst} exceeds cap {params.max_degree}")
    if is_rotation_ambiguous(s):
        errs.append("congruent to its own 180-degree rotation")
    return errs


def gen_voxel_snake(params: SnakeParams, seed: int, index: int = 0) -> VoxelStructure:
    rng = Rng(seed, "rotation", index)
    for attempt in range(1000):
        sub = rng.split("attempt", attempt)
        cubes = _grow_once(params, sub)
        if cubes is None:
            continue
        s = VoxelStructure(frozenset(cubes))
        if not structure_errors(s, params):
            return s
    raise GenerationError(f"no valid structure in 1000 attempts (seed={seed}, index={index})")


# -- rendering ---------------------------------------------------------------

_FACE_CORNERS = (
    # +x, -x, +y, -y, +z, -z ; unit-cube corners per face
    (((1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)), (1, 0, 0)),
    (((0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 0)), (-1, 0, 0)),
    (((0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 1, 0)), (0, 1, 0)),
    (((0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)), (0, -1, 0)),
    (((0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)), (0, 0, 1)),
    (((0, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, 0)), (0, 0, -1)),
)


def _centered_cubes(s: VoxelStructure) -> tuple[list[Coord], tuple[float, float, float]]:
    cubes = s.sorted_cubes()
    lo = [min(c[a] for c in cubes) for a in range(3)]
    hi = [max(c[a] + 1 for c in cubes) for a in range(3)]
    center = tuple((lo[a] + hi[a]) / 2.0 for a in range(3))
    return cubes, center


def bounding_radius(s: VoxelStructure) -> float:
    cubes, center = _centered_cubes(s)
    best = 0.0
    for c in cubes:
        for corner in ((0, 0, 0), (1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)):
            d = sum((c[a] + corner[a] - center[a]) ** 2 for a in range(3)) ** 0.5
            best = max(best, d)
    return best


def render_structure(s: VoxelStructure, elevation_deg: float, azimuth_deg: float) -> ImageCanvas:
    cubes, center = _centered_cubes(s)
    cube_set = set(cubes)
    cam = CameraPose(elevation_deg, azimuth_deg, 2.5 * bounding_radius(s))
    eye = cam.eye()
    canvas = new_canvas(FRAME_W, FRAME_H)
    faces = []
    for cube in cubes:
        for corners, normal in _FACE_CORNERS:
            if _add(cube, normal) in cube_set:
                continue  # interior face
            pts3 = [
                (
                    cube[0] + k[0] - center[0],
                    cube[1] + k[1] - center[1],
                    cube[2] + k[2] - center[2],
                )
                for k in corners
            ]
            quad = [project_point(p, cam, (FRAME_W, FRAME_H)) for p in pts3]
            cx = sum(p[0] for p in pts3) / 4.0
            cy = sum(p[1] for p in pts3) / 4.0
            cz = sum(p[2] for p in pts3) / 4.0
            depth = ((cx - eye[0]) ** 2 + (cy - eye[1]) ** 2 + (cz - eye[2]) ** 2) ** 0.5
            faces.append((quad, depth, FACE_COLOR))
    render_faces(faces, canvas)
    return canvas


def make_rotation_task(s: VoxelStructure, seed: int, index: int = 0) -> TaskUnit:
    rng = Rng(seed, "rotation-view", index)
    elevation = rng.uniform(20.0, 40.0)
    azimuth = rng.uniform(0.0, 360.0)
    first = render_structure(s, elevation, azimuth)
    final = render_structure(s, elevation, azimuth + 180.0)
    return TaskUnit(
        id=make_task_id("rotation", seed, index),
        domain="rotation",
        first_frame=first,
        final_frame=final,
        prompt=PROMPT,
        ground_truth={
            "cubes": [list(c) for c in s.sorted_cubes()],
            "elevation_deg": elevation,
            "azimuth_first_deg": azimuth % 360.0,
            "azimuth_final_deg": (azimuth + 180.0) % 360.0,
        },
        seed=seed,
    )
