import os

import pytest
from hypothesis import HealthCheck, settings

from slowentropy.arithmetic import GOLDEN, IrrationalParam, parse_cf

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SILVER = parse_cf("[0;(2)]")
MIXED = parse_cf("[0;1,2,(3)]")


@pytest.fixture(scope="session")
def golden_deep():
    return IrrationalParam.for_horizon(GOLDEN, 10**6)


# one pass/fail line per acceptance criterion, printed after the run
_CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid or "::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.failed:
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _CRITERIA.setdefault(name, ("PASS" if report.passed else "FAIL", detail))
        if report.failed:
            _CRITERIA[name] = ("FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        status, detail = _CRITERIA[name]
        number = int(name.split("_")[2])
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")
