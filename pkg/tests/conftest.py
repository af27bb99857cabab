import numpy as np
import pytest

_CRITERIA: dict[int, str] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion():
    """Record (and print) one pass/fail line for an acceptance criterion."""

    def record(number: int, description: str, ok: bool, value: float | None = None):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {description}"
        if value is not None:
            line += f"  [{value:.3e}]"
        _CRITERIA[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[n])
