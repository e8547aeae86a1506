import pytest

# (criterion, passed, detail) lines filled in by the acceptance tests
_RESULTS = []


@pytest.fixture
def record():
    """Record one acceptance line, then fail the test if it did not pass."""
    def _record(name, passed, detail):
        _RESULTS.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(_RESULTS, key=lambda r: int(r[0].split()[0].rstrip("."))):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
