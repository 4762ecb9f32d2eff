from __future__ import annotations

import sys

import pytest

from wtaplan.data_io import load_bundled


@pytest.fixture(scope="session")
def bundled():
    return load_bundled()


@pytest.fixture(scope="session")
def bundled_solution(bundled):
    from wtaplan.planner import solve_configuration

    return solve_configuration(bundled)


@pytest.fixture(scope="session")
def bundled_costs(bundled, bundled_solution):
    from wtaplan.planner import decompose_costs

    return decompose_costs(bundled_solution, bundled)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
