from __future__ import annotations

import pytest


@pytest.fixture(scope="session")
def chess_pool():
    """Validated template pool, enumerated once per test session."""
    from vidreason.chess import enumerate_pool

    return enumerate_pool()


@pytest.fixture(scope="session")
def small_task_root(tmp_path_factory):
    """Two tasks per domain, shared by pipeline/judge/service tests."""
    from vidreason.generate import generate_domain

    root = tmp_path_factory.mktemp("tasks")
    for domain in ("sudoku", "maze", "rpm"):
        generate_domain(domain, 2, seed=11, out_root=root)
    return root


@pytest.fixture(scope="session")
def mock_run(small_task_root, tmp_path_factory):
    """A finished mock inference run over small_task_root."""
    from vidreason.pipeline import InferenceParams, mock_catalog, run_suite

    run_root = tmp_path_factory.mktemp("runs")
    manifest = run_suite(mock_catalog(), small_task_root, run_root, InferenceParams(), concurrency=3)
    return run_root, manifest
