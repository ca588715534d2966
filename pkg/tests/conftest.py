import re

import pytest

from lintrack import casestudies

_ACCEPTANCE: dict[int, list[tuple[str, str]]] = {}


@pytest.fixture(scope="session")
def rw():
    return casestudies.load("rwcas")


@pytest.fixture(scope="session")
def broken():
    return casestudies.load("broken_write")


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_c(\d+)_", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE.setdefault(int(m.group(1)), []).append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _ACCEPTANCE.get(n)
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(o == "passed" for _, o in results) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status:7s} {CRITERIA[n]}")
