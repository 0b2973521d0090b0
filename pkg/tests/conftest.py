from __future__ import annotations

import os
from pathlib import Path

import pytest

from growth1324.cli import main
from growth1324.qtable import load_q_table

ACCEPTANCE_LINES: list[str] = []


def _table_file(tmp_path_factory, n: int, env: str) -> Path:
    """A table file for bound ``n``; ``$env`` may point at a prebuilt copy."""
    pre = os.environ.get(env)
    if pre and Path(pre).is_file():
        return Path(pre)
    path = tmp_path_factory.mktemp(f"q{n}") / f"q{n}.csv"
    assert main(["q", "table", "--max-n", str(n), "--out", str(path)]) == 0
    return path


@pytest.fixture(scope="session")
def q8_path(tmp_path_factory) -> Path:
    return _table_file(tmp_path_factory, 8, "GROWTH1324_Q8")


@pytest.fixture(scope="session")
def q8_table(q8_path):
    return load_q_table(q8_path)


@pytest.fixture(scope="session")
def q14_path(tmp_path_factory) -> Path:
    return _table_file(tmp_path_factory, 14, "GROWTH1324_Q14")


@pytest.fixture(scope="session")
def q14_table(q14_path):
    return load_q_table(q14_path, require_n=14)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
