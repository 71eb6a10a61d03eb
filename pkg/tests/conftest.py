"""Per-criterion PASS/FAIL report for the acceptance suite.

Tests marked ``@pytest.mark.criterion(n)`` are grouped by ``n``; a criterion
passes only if every test carrying its number passes. Measured values recorded
with ``record_property("measured", ...)`` are echoed in the summary line.
"""
from collections import defaultdict

import pytest

_results = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        number, title = marker.args
        measured = dict(item.user_properties).get("measured", "")
        label = getattr(item, "callspec", None)
        _results[(number, title)].append((label.id if label else "", rep.passed, measured))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), checks in sorted(_results.items()):
        ok = all(passed for _, passed, _ in checks)
        parts = []
        for label, passed, measured in checks:
            text = f"{label}: " if label else ""
            text += measured or ("ok" if passed else "failed")
            if label and not passed:
                text += " [FAIL]"
            parts.append(text)
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'} - {title}: " + "; ".join(parts))
