import pytest

from aid.model import Team
from instances import ACCEPTANCE_LINES, RATIO_CHAIN_ROWS, enrollment


@pytest.fixture
def ratio_chain_team():
    return Team(("x", "w", "y"), RATIO_CHAIN_ROWS)


@pytest.fixture
def enrollment_team():
    return enrollment()


@pytest.fixture
def empty_team():
    return Team(("x", "y"), [])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
