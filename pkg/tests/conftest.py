import pytest

# criterion number -> (passed, detail); filled in by test_acceptance
ACCEPTANCE = {}


def record(n, passed, detail=""):
    ACCEPTANCE[n] = (bool(passed), detail)
    return passed


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
