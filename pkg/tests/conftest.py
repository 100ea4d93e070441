"""Collects the one-line verdicts of the acceptance criteria and prints them at the end of the run."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
