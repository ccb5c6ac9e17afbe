import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from schemmel.certify import enumerate_sparsely  # noqa: E402

ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def certified():
    """Memoized certified enumerations keyed by (r, X)."""
    cache = {}

    def get(r, X):
        if (r, X) not in cache:
            cache[r, X] = enumerate_sparsely(r, X)
        return cache[r, X]

    return get


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion."""
    def record(number, label):
        ACCEPTANCE_RESULTS[number] = [label, None]
        request.node._acceptance = number
    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    number = getattr(item, "_acceptance", None)
    if number is not None and rep.when == "call":
        ACCEPTANCE_RESULTS[number][1] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        label, passed = ACCEPTANCE_RESULTS[number]
        status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[passed]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {label}")
