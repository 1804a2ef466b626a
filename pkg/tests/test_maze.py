from __future__ import annotations

import numpy as np
import pytest

from oracles import count_spanning_trees_bruteforce, count_spanning_trees_kirchhoff, enumerate_simple_paths
from vidreason.maze import EDGES, GREEN, MazeSpec, gen_maze, make_maze_task, render_maze, solve_maze


def test_lattice_has_12_edges():
    assert len(EDGES) == 12
    assert len(set(EDGES)) == 12


def test_every_maze_is_a_spanning_tree():
    for seed in range(200):
        spec = gen_maze(seed)
        assert len(spec.walls) == 4
        assert len(spec.passages()) == 8
        # connected + 8 edges on 9 nodes == tree
        path = solve_maze(spec)
        assert path[0] == spec.start and path[-1] == spec.goal


def test_determinism():
    for seed in (0, 5, 999):
        assert gen_maze(seed) == gen_maze(seed)


def test_unique_path_matches_bruteforce_enumeration():
    for seed in range(60):
        spec = gen_maze(seed)
        paths = enumerate_simple_paths(spec.passages(), spec.start, spec.goal)
        assert len(paths) == 1
        assert [tuple(c) for c in paths[0]] == list(spec.solution)


def test_min_path_length_three_cells():
    for seed in range(100):
        assert len(gen_maze(seed).solution) >= 3


def test_spanning_tree_oracles_agree():
    assert count_spanning_trees_kirchhoff() == 192
    assert count_spanning_trees_bruteforce() == 192


def test_disconnected_input_rejected():
    spec = gen_maze(0)
    broken = MazeSpec(3, 3, frozenset(EDGES[:5]), spec.start, spec.goal, spec.solution)
    with pytest.raises(ValueError):
        solve_maze(broken)


def test_render_dimensions_and_dpi():
    spec = gen_maze(1)
    frame = render_maze(spec, spec.start)
    assert (frame.width, frame.height) == (832, 480)
    task = make_maze_task(spec, 1)
    assert task.dpi == 100
    # the written PNG carries a pHYs chunk encoding 100 dpi
    from vidreason.raster import encode_png

    assert b"pHYs" in encode_png(frame, dpi=100)


def test_flag_identical_in_both_frames():
    spec = gen_maze(2)
    task = make_maze_task(spec, 2)
    first, final = task.first_frame.px, task.final_frame.px
    red = (first == (214, 40, 40)).all(axis=2)
    assert red.any()
    assert np.array_equal(first[red], final[red])
    pole = (first == (80, 60, 40)).all(axis=2)
    assert np.array_equal(first[pole], final[pole])


def test_frames_differ_only_in_marker_and_trail():
    spec = gen_maze(3)
    task = make_maze_task(spec, 3)
    diff = (task.first_frame.px != task.final_frame.px).any(axis=2)
    changed = {tuple(p) for p in np.argwhere(diff)}
    assert changed
    # every changed pixel is green in one frame or the other: the vanished
    # start marker, the trail, or the marker now at the goal
    first, final = task.first_frame.px, task.final_frame.px
    for y, x in changed:
        was_green = tuple(first[y, x]) == GREEN
        is_green = tuple(final[y, x]) == GREEN
        assert was_green or is_green


def test_wall_strokes_avoid_marker_cell_interior():
    # walls are 6 px strokes on cell borders; the 34 px marker sits at the
    # cell center, so black never touches the marker disc
    for seed in range(20):
        spec = gen_maze(seed)
        frame = render_maze(spec, spec.start)
        size = 3 * 120
        x0 = (832 - size) // 2
        y0 = (480 - size) // 2
        cx = x0 + spec.start[1] * 120 + 60
        cy = y0 + spec.start[0] * 120 + 60
        disc = frame.px[cy - 34 : cy + 35, cx - 34 : cx + 35]
        assert not (disc == 0).all(axis=2).any()
