"""Collects acceptance-criterion outcomes and prints one verdict line per criterion."""

from collections import OrderedDict

import pytest

_RESULTS_KEY = pytest.StashKey[OrderedDict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): part of a numbered acceptance criterion")
    config.stash[_RESULTS_KEY] = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, title = marker.args
        entry = item.config.stash[_RESULTS_KEY].setdefault(number, {"title": title, "parts": {}})
        entry["parts"][item.name] = report.passed


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS_KEY, None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        entry = results[number]
        parts = entry["parts"]
        verdict = "PASS" if all(parts.values()) else "FAIL"
        failed = [name for name, ok in parts.items() if not ok]
        detail = f"{sum(parts.values())}/{len(parts)} parts"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        terminalreporter.write_line(f"criterion {number:>2} {verdict}  {entry['title']} ({detail})")
