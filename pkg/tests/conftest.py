from pathlib import Path

import pytest

from ttground.oracle import read_fixture

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixture_lambda():
    """Pinned oracle eigenvalue of the periodic spin-1 chain of length ``d``."""

    def get(d: int) -> float:
        return read_fixture(FIXTURES / f"heisenberg_periodic_d{d}.txt")

    return get


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(name: str, ok: bool, detail: str) -> None:
        line = f"{name}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
