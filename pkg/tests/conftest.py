import numpy as np
import pytest

from qmorph.core import RegisterLayout


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def layout3():
    """4x4 image, 3 gray bits."""
    return RegisterLayout(2, 3)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS = {}
REPORT_LINES = []


@pytest.fixture
def acceptance_report():
    """Append lines here to have them printed under the criteria summary."""
    return REPORT_LINES


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for mark in report.keywords:
        if mark.startswith("criterion_"):
            ACCEPTANCE_RESULTS[report.nodeid] = (mark, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    by_criterion = {}
    for nodeid, (mark, outcome) in ACCEPTANCE_RESULTS.items():
        by_criterion.setdefault(mark, []).append((nodeid, outcome))
    for mark in sorted(by_criterion, key=lambda m: int(m.split("_")[1])):
        entries = by_criterion[mark]
        ok = all(o == "passed" for _, o in entries)
        name = entries[0][0].split("::")[-1]
        terminalreporter.write_line(
            f"criterion {mark.split('_')[1]}: {'PASS' if ok else 'FAIL'} ({len(entries)} check(s), e.g. {name})"
        )
    for line in REPORT_LINES:
        terminalreporter.write_line(line)
