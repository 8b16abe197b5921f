import pytest

from helpers import ACCEPTANCE_LINES, table1


@pytest.fixture
def t1():
    return table1()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
