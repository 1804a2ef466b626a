from __future__ import annotations

import numpy as np

from oracles import latin3_bruteforce_count
from vidreason.sudoku import (
    BLANK_GRAY,
    DIGIT_HEIGHT,
    SudokuSpec,
    enumerate_latin3,
    gen_sudoku,
    make_sudoku_task,
    render_sudoku,
)


def test_twelve_latin_squares():
    grids = enumerate_latin3()
    assert len(grids) == 12
    assert len(set(grids)) == 12
    assert ((1, 2, 3), (2, 3, 1), (3, 1, 2)) in grids


def test_catalog_matches_bruteforce_scan():
    assert len(enumerate_latin3()) == latin3_bruteforce_count()


def test_catalog_sorted_canonically():
    grids = enumerate_latin3()
    assert grids == sorted(grids)


def test_answer_is_forced():
    # a Latin square with one blank admits exactly one completing digit
    for seed in range(30):
        spec = gen_sudoku(seed)
        r, c = spec.blank
        row = [spec.solution[r][j] for j in range(3) if j != c]
        col = [spec.solution[i][c] for i in range(3) if i != r]
        candidates = [d for d in (1, 2, 3) if d not in row and d not in col]
        assert candidates == [spec.answer]


def test_full_pair_coverage_over_108_seeds():
    pairs = {(gen_sudoku(seed).solution, gen_sudoku(seed).blank) for seed in range(108)}
    assert len(pairs) == 108


def test_spec_validation():
    grids = enumerate_latin3()
    try:
        SudokuSpec(solution=grids[0], blank=(0, 0), answer=(grids[0][0][0] % 3) + 1)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_frames_differ_only_in_blank_tile():
    spec = gen_sudoku(5)
    task = make_sudoku_task(spec, 5)
    diff = np.argwhere((task.first_frame.px != task.final_frame.px).any(axis=2))
    assert diff.size > 0
    size = 3 * 110
    x0 = (480 - size) // 2
    y0 = (480 - size) // 2
    br, bc = spec.blank
    ys, xs = diff[:, 0], diff[:, 1]
    assert (ys >= y0 + br * 110).all() and (ys < y0 + (br + 1) * 110).all()
    assert (xs >= x0 + bc * 110).all() and (xs < x0 + (bc + 1) * 110).all()


def test_blank_cell_light_gray():
    spec = gen_sudoku(9)
    frame = render_sudoku(spec, show_blank=True)
    assert (frame.px == BLANK_GRAY).all(axis=2).any()
    assert BLANK_GRAY == (230, 230, 230)


def test_digit_height_is_32px():
    # "24pt bold" maps to exactly 32 rendered pixel rows per digit
    assert DIGIT_HEIGHT == 32
    frame = render_sudoku(gen_sudoku(3), show_blank=False)
    x0 = y0 = (480 - 330) // 2
    # cell interiors only (grid lines live within 5 px of cell edges)
    for r in range(3):
        for c in range(3):
            region = frame.px[y0 + r * 110 + 10 : y0 + r * 110 + 100, x0 + c * 110 + 10 : x0 + c * 110 + 100]
            ys = np.nonzero((region == 0).all(axis=2))[0]
            assert ys.size > 0
            assert ys.max() - ys.min() + 1 == 32


def test_determinism():
    for seed in (0, 17, 91):
        a = make_sudoku_task(gen_sudoku(seed), seed)
        b = make_sudoku_task(gen_sudoku(seed), seed)
        assert a.first_frame.same_pixels(b.first_frame)
        assert a.final_frame.same_pixels(b.final_frame)
        assert a.ground_truth == b.ground_truth
