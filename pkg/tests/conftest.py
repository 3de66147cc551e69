import pytest

from hulthen.potential import HulthenParams

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def tall_narrow():
    return HulthenParams(4.0, 1.0, 0.9)


@pytest.fixture
def tall_wide():
    return HulthenParams(4.0, 0.5, 0.9)


@pytest.fixture
def low_narrow():
    return HulthenParams(4.0, 1.0, 0.5)


@pytest.fixture
def low_wide():
    return HulthenParams(4.0, 0.5, 0.5)


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def _record(number: int, name: str, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {name} -- {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
