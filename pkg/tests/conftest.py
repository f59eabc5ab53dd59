import pytest

GATE_LINES: list[str] = []


@pytest.fixture
def gate_log():
    return GATE_LINES


def pytest_terminal_summary(terminalreporter):
    if not GATE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in GATE_LINES:
        terminalreporter.write_line(line)
