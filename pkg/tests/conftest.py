import pytest

from hermitian.gf import create_field
from hermitian.surface import Surface


@pytest.fixture(scope="session")
def F4():
    return create_field(2, 1)


@pytest.fixture(scope="session")
def F9():
    return create_field(3, 1)


@pytest.fixture(scope="session")
def surfaces():
    cache = {}

    def get(p, a=1):
        if (p, a) not in cache:
            cache[(p, a)] = Surface.over(p, a)
        return cache[(p, a)]

    return get


@pytest.fixture(scope="session")
def S2(surfaces):
    return surfaces(2)


@pytest.fixture(scope="session")
def S3(surfaces):
    return surfaces(3)


ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.fixture(autouse=True)
def _report_criterion(request):
    """Record a pass/fail line for tests marked ``criterion``; a test may put
    extra text in ``request.node.detail``."""
    marker = request.node.get_closest_marker("criterion")
    yield
    if marker is not None:
        rep = getattr(request.node, "rep_call", None)
        passed = rep is not None and rep.passed
        number, title = marker.args
        ACCEPTANCE_LINES.append((number, passed, title, getattr(request.node, "detail", "")))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, title, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {title}  {detail}".rstrip())
