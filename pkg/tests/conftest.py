import pytest

_verdicts: list[str] = []


@pytest.fixture
def verdict():
    """Collects one-line pass/fail verdicts to echo after the test run."""
    def _record(line: str) -> None:
        print(line)
        _verdicts.append(line)
    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in _verdicts:
            terminalreporter.write_line(line)
