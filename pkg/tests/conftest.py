import pytest

# lines collected by the acceptance suite, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def emit(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
