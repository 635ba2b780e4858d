import numpy as np
import pytest

from clarkeframe import RobotGeometry

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the outcome is printed in the terminal summary."""
    entry = {"name": request.node.name, "detail": ""}
    _ACCEPTANCE.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        for entry in _ACCEPTANCE:
            if entry["name"] == item.name:
                entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in _ACCEPTANCE:
        status = "PASS" if entry.get("passed") else "FAIL"
        terminalreporter.write_line(f"{status}  {entry['name']}  {entry['detail']}")


@pytest.fixture
def demo_geometry():
    return RobotGeometry(n=5, l=0.07, d=0.01)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
