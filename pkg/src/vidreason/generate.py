"""Seeded task generation across all five domains."""
from __future__ import annotations

from pathlib import Path

from . import chess, maze, rotation, rpm, sudoku
from .rng import Rng
from .task import DOMAINS, TaskUnit, write_task

# rpm rule kinds rotate per task index so a batch exercises every category
_RPM_CYCLE = ("shape_prog", "number_prog", "rotation_prog", "color_seq", "combination")

_chess_pool_cache: list | None = None


def _chess_pool():
    global _chess_pool_cache
    if _chess_pool_cache is None:
        pool = chess.enumerate_pool()
        _chess_pool_cache = pool["backrank"] + pool["queen_corner"] + pool["tactical"]
    return _chess_pool_cache


def generate_task(domain: str, seed: int, index: int) -> TaskUnit:
    if domain == "sudoku":
        return sudoku.make_sudoku_task(sudoku.gen_sudoku(seed, index), seed, index)
    if domain == "maze":
        return maze.make_maze_task(maze.gen_maze(seed, index), seed, index)
    if domain == "rpm":
        rule = _RPM_CYCLE[index % len(_RPM_CYCLE)]
        return rpm.make_rpm_task(rpm.gen_rpm([rule], seed, index), seed, index)
    if domain == "rotation":
        n_cubes = 8 + Rng(seed, "rotation-size", index).randint(0, 1)
        params = rotation.SnakeParams(n_cubes=n_cubes)
        return rotation.make_rotation_task(rotation.gen_voxel_snake(params, seed, index), seed, index)
    if domain == "chess":
        pool = _chess_pool()
        order = list(range(len(pool)))
        Rng(seed, "chess-order").shuffle(order)
        return chess.make_chess_task(pool[order[index % len(order)]], seed, index)
    raise ValueError(f"unknown domain {domain!r}; expected one of {DOMAINS}")


def generate_domain(domain: str, count: int, seed: int, out_root: Path) -> list[Path]:
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    paths = []
    for index in range(count):
        task = generate_task(domain, seed, index)
        paths.append(write_task(task, out_root))
    return paths
