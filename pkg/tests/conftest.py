import os

import numpy as np
import pytest

_OUTCOMES = {}
_RANK = {"SKIP": 0, "PASS": 1, "FAIL": 2}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion number n")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("HELECELL_FULL_SCALE") == "1":
        return
    skip = pytest.mark.skip(reason="full-scale run; set HELECELL_FULL_SCALE=1")
    for item in items:
        if "fullscale" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, label = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        # a criterion split over several tests: any failure wins, skips never mask a result
        prev = _OUTCOMES.get(n, (label, "SKIP"))[1]
        if _RANK[status] > _RANK[prev] or n not in _OUTCOMES:
            _OUTCOMES[n] = (label, status)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        label, status = _OUTCOMES[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {label}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
