import sys

import pytest
from hypothesis import settings

from qproj import cartan, config

settings.register_profile("qproj", max_examples=40, deadline=None)
settings.load_profile("qproj")


@pytest.fixture(autouse=True, scope="session")
def _raised_height_limit():
    # the largest truncations exercised here reach height 10
    with config.limit_heights(12):
        yield


@pytest.fixture(scope="session")
def A1():
    return cartan.preset("A1")


@pytest.fixture(scope="session")
def A2():
    return cartan.preset("A2")


@pytest.fixture(scope="session")
def B2():
    return cartan.preset("B2")


@pytest.fixture(scope="session")
def G2():
    return cartan.preset("G2")


def pytest_terminal_summary(terminalreporter):
    RESULTS = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, seconds, note = RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({seconds:.1f} s)"
        terminalreporter.write_line(line + (f"  {note}" if note else ""))
