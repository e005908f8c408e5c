import numpy as np
import pytest

from dter import Frame
from dter.synthetic import smooth_field


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def texture():
    """Smooth 160x192 canvas, enough structure for unambiguous matching."""
    return smooth_field(160, 192, sigma=1.5, contrast=45, seed=7)


def frame_of(arr):
    return Frame(np.asarray(arr))


_criteria: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        detail = ""
        if report.skipped and isinstance(report.longrepr, tuple):
            detail = report.longrepr[2]
        _criteria.append((marker.args[0], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, outcome, detail in _criteria:
        tag = {"passed": "PASS", "failed": "FAIL", "skipped": "NOT RUN"}[outcome]
        line = f"{tag:8s} {name}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
