from __future__ import annotations

import os
from collections import defaultdict

import numpy as np
import pytest

from hybridmoea.benchmarks import get_problem

ACCEPTANCE_TITLES = {
    1: "example invocation (4 jobs, 12 chunks)",
    2: "budget conservation",
    3: "dominance/filter oracle equivalence",
    4: "indicator oracles",
    5: "convergence sanity on ZDT1",
    6: "proxy isolation",
    7: "config resolution fixture",
    8: "determinism and crash safety",
    9: "meta-model structural invariants",
}

_outcomes: dict[int, list[str]] = defaultdict(list)


def pytest_runtest_logreport(report):
    number = getattr(report, "acceptance_number", None)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[number].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance_number = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_TITLES):
        results = _outcomes.get(number)
        if not results:
            status = "NOT RUN"
        elif all(r == "passed" for r in results):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {ACCEPTANCE_TITLES[number]}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def zdt1():
    return get_problem("ZDT1")


@pytest.fixture
def workers():
    return min(4, os.cpu_count() or 1)
