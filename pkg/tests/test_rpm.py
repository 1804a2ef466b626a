from __future__ import annotations

import numpy as np
import pytest

from oracles import rpm_valid_completions
from vidreason.rpm import (
    BASE_RULES,
    CellAttrs,
    all_attr_candidates,
    apply_rule,
    gen_rpm,
    make_rpm_task,
    render_rpm,
)


def test_attribute_domain_size():
    assert len(all_attr_candidates()) == 3 * 3 * 4 * 3 == 108


def test_shape_progression_step():
    a = CellAttrs("triangle", 1, 0, "red")
    assert apply_rule(a, "shape_prog", 1).shape == "square"
    assert apply_rule(a, "shape_prog", 2).shape == "circle"


def test_number_progression_step():
    a = CellAttrs("circle", 1, 0, "blue")
    assert apply_rule(a, "number_prog", 2).count == 3


def test_rotation_zero_step_identity():
    a = CellAttrs("triangle", 2, 0, "green")
    assert apply_rule(a, "rotation_prog", 0) == a


def test_color_sequence():
    a = CellAttrs("square", 1, 90, "red")
    assert apply_rule(a, "color_seq", 1).color == "blue"
    assert apply_rule(a, "color_seq", 2).color == "green"


def test_unknown_rule_rejected():
    a = CellAttrs("square", 1, 0, "red")
    with pytest.raises(ValueError):
        apply_rule(a, "combination", 1)
    with pytest.raises(ValueError):
        apply_rule(a, "stripes", 1)


def test_three_cycle_rules_return_to_start():
    a = CellAttrs("square", 2, 180, "blue")
    for rule in ("shape_prog", "number_prog", "color_seq"):
        cur = a
        for _ in range(3):
            cur = apply_rule(cur, rule, 1)
        assert cur == a


def test_cell_attrs_validation():
    with pytest.raises(ValueError):
        CellAttrs("hexagon", 1, 0, "red")
    with pytest.raises(ValueError):
        CellAttrs("circle", 4, 0, "red")
    with pytest.raises(ValueError):
        CellAttrs("circle", 1, 45, "red")


def test_rows_satisfy_rules():
    for seed in range(30):
        spec = gen_rpm(["shape_prog"], seed)
        for row in spec.grid:
            for step in range(3):
                assert row[step].shape == apply_rule(row[0], "shape_prog", step).shape
                # ungoverned attributes stay constant within the row
                assert row[step].count == row[0].count
                assert row[step].color == row[0].color


def test_uniqueness_exhaustive_scan():
    for seed in range(40):
        for rule in BASE_RULES + ("combination",):
            spec = gen_rpm([rule], seed)
            row = spec.grid[2]
            hits = rpm_valid_completions(spec.rules, (row[0].shape, row[0].count, row[0].rotation, row[0].color))
            assert len(hits) == 1
            assert hits[0] == (spec.answer.shape, spec.answer.count, spec.answer.rotation, spec.answer.color)


def test_combination_expands_to_two_rules():
    for seed in range(10):
        spec = gen_rpm(["combination"], seed)
        assert len(spec.rules) >= 2
        assert all(r in BASE_RULES for r in spec.rules)


def test_combination_differs_from_single_rule_answer():
    # with shape+color active the answer moves in both attributes
    for seed in range(20):
        spec = gen_rpm(["shape_prog", "color_seq"], seed)
        first = spec.grid[2][0]
        assert spec.answer.shape == apply_rule(first, "shape_prog", 2).shape
        assert spec.answer.color == apply_rule(first, "color_seq", 2).color
        single = gen_rpm(["shape_prog"], seed)
        assert ("color_seq" in spec.rules) and ("color_seq" not in single.rules)


def test_no_all_circle_rotation_rows():
    for seed in range(40):
        spec = gen_rpm(["rotation_prog"], seed)
        for row in spec.grid:
            assert not all(cell.shape == "circle" for cell in row)


def test_empty_selection_rejected():
    with pytest.raises(ValueError):
        gen_rpm([], 0)


def test_canvas_size_450():
    spec = gen_rpm(["color_seq"], 1)
    frame = render_rpm(spec, with_answer=True)
    assert (frame.width, frame.height) == (450, 450)


def test_frames_differ_only_in_bottom_right_tile():
    for seed in range(10):
        spec = gen_rpm(["number_prog"], seed)
        task = make_rpm_task(spec, seed)
        diff = np.argwhere((task.first_frame.px != task.final_frame.px).any(axis=2))
        assert diff.size > 0
        assert (diff[:, 0] >= 300).all() and (diff[:, 1] >= 300).all()


def test_rotated_triangle_distinct_pixels():
    a = CellAttrs("triangle", 1, 0, "red")
    b = CellAttrs("triangle", 1, 90, "red")
    grid_a = ((a,) * 3,) * 3
    grid_b = ((b,) * 3,) * 3
    fa = render_rpm(type("S", (), {"grid": grid_a, "rules": ("x",), "answer": a})(), True)
    fb = render_rpm(type("S", (), {"grid": grid_b, "rules": ("x",), "answer": b})(), True)
    assert not fa.same_pixels(fb)


def test_determinism():
    for seed in (0, 3, 77):
        assert gen_rpm(["combination"], seed) == gen_rpm(["combination"], seed)
