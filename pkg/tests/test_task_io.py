from __future__ import annotations

import json
import os

import pytest

from vidreason.raster import BLACK, new_canvas
from vidreason.sudoku import gen_sudoku, make_sudoku_task
from vidreason.task import TaskError, TaskUnit, read_task, write_task


def _tiny_task(task_id="sudoku_7_0", domain="sudoku", gt=None):
    first = new_canvas(8, 6, (255, 255, 255))
    final = first.clone()
    final.fill_rect(2, 2, 3, 3, BLACK)
    return TaskUnit(
        id=task_id,
        domain=domain,
        first_frame=first,
        final_frame=final,
        prompt="fill the square",
        ground_truth=gt if gt is not None else {"answer": 3, "cells": [[1, 2], [3, 4]]},
        seed=7,
    )


def test_write_task_layout(tmp_path):
    out = write_task(_tiny_task(), tmp_path)
    assert out == tmp_path / "sudoku_7_0"
    names = sorted(p.name for p in out.iterdir())
    assert names == ["final_frame.png", "first_frame.png", "ground_truth.json", "prompt.txt", "task.json"]
    meta = json.loads((out / "task.json").read_text())
    assert meta == {"id": "sudoku_7_0", "domain": "sudoku", "seed": 7, "width": 8, "height": 6}


def test_write_refuses_overwrite(tmp_path):
    write_task(_tiny_task(), tmp_path)
    with pytest.raises(TaskError, match="overwrite"):
        write_task(_tiny_task(), tmp_path)


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores permission bits")
def test_write_to_readonly_root(tmp_path):
    ro = tmp_path / "ro"
    ro.mkdir()
    os.chmod(ro, 0o500)
    try:
        with pytest.raises(TaskError):
            write_task(_tiny_task(), ro)
    finally:
        os.chmod(ro, 0o700)


def test_write_to_nondirectory_root(tmp_path):
    not_a_dir = tmp_path / "file"
    not_a_dir.write_text("x")
    with pytest.raises(TaskError, match="not a directory"):
        write_task(_tiny_task(), not_a_dir)


def test_round_trip_structural_equality(tmp_path):
    # randomized ground truths and frames across many tasks
    for i in range(8):
        spec = gen_sudoku(i, 3)
        task = make_sudoku_task(spec, i, 3)
        out = write_task(task, tmp_path)
        back = read_task(out)
        assert back.id == task.id
        assert back.domain == task.domain
        assert back.seed == task.seed
        assert back.prompt == task.prompt
        assert back.ground_truth == task.ground_truth
        assert back.first_frame.same_pixels(task.first_frame)
        assert back.final_frame.same_pixels(task.final_frame)


def test_reencode_is_byte_stable(tmp_path):
    from vidreason.raster import encode_png

    task = _tiny_task()
    out = write_task(task, tmp_path)
    original = (out / "first_frame.png").read_bytes()
    assert encode_png(read_task(out).first_frame) == original


def test_missing_file_named(tmp_path):
    out = write_task(_tiny_task(), tmp_path)
    (out / "prompt.txt").unlink()
    with pytest.raises(TaskError, match="prompt.txt"):
        read_task(out)


def test_corrupt_ground_truth_reports_offset(tmp_path):
    out = write_task(_tiny_task(), tmp_path)
    gt = out / "ground_truth.json"
    # truncate at assorted byte offsets; every cut must fail with an offset
    full = gt.read_text()
    for cut in (1, len(full) // 3, len(full) - 2):
        gt.write_text(full[:cut])
        with pytest.raises(TaskError, match="byte"):
            read_task(out)


def test_frame_dimension_invariant(tmp_path):
    task = _tiny_task()
    task.final_frame = new_canvas(9, 6, BLACK)
    with pytest.raises(TaskError, match="dimensions"):
        write_task(task, tmp_path)


def test_identical_frames_rejected(tmp_path):
    task = _tiny_task()
    task.final_frame = task.first_frame.clone()
    with pytest.raises(TaskError, match="identical"):
        write_task(task, tmp_path)


def test_dimension_mismatch_on_read(tmp_path):
    out = write_task(_tiny_task(), tmp_path)
    meta = json.loads((out / "task.json").read_text())
    meta["width"] = 99
    (out / "task.json").write_text(json.dumps(meta))
    with pytest.raises(TaskError, match="99"):
        read_task(out)
