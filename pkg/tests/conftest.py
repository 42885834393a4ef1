import time

import pytest

from e7paving.report import RunConfig, analyze_case

ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def analysis():
    """Default-config analyses, computed once per session."""
    cache = {}

    def get(case: str):
        if case not in cache:
            t0 = time.perf_counter()
            cache[case] = analyze_case(case, RunConfig(cases=(case,)))
            cache[case].elapsed = time.perf_counter() - t0
        return cache[case]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
