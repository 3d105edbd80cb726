import pytest

_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion_log():
    """Record one line per acceptance criterion; all lines are repeated in the terminal summary."""

    def log(name: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        print(line)
        _LINES.append(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
