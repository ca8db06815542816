import pytest

from conic_census.arith import build_sieve

_CRITERIA: list[str] = []


@pytest.fixture(scope="session")
def sieve():
    return build_sieve(10**5)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion; the lines are echoed at the end of the run."""

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        print(line)
        _CRITERIA.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: s.split()[2]):
            terminalreporter.write_line(line)
