import numpy as np
import pytest

_acceptance_lines = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for name, value in report.user_properties:
        if name == "criterion":
            status = "PASS" if report.passed else "FAIL"
            _acceptance_lines.append(f"[{status}] criterion {value}")


@pytest.fixture
def criterion(record_property):
    """Label an acceptance test; a pass/fail line is printed in the summary."""

    def label(text):
        record_property("criterion", text)

    return label


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
