"""Pytest glue: one PASS/FAIL line per acceptance criterion at the end."""

from __future__ import annotations

import pytest

_results: dict[int, dict] = {}


def _marker_info(item):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return None
    number = marker.args[0]
    note = marker.kwargs.get("note", "")
    return number, note


def pytest_collection_modifyitems(items):
    for item in items:
        info = _marker_info(item)
        if info is not None:
            number, note = info
            entry = _results.setdefault(number, {"note": note, "passed": None})
            if note and not entry["note"]:
                entry["note"] = note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    info = _marker_info(item)
    if info is None:
        return
    number, _ = info
    entry = _results.get(number)
    if entry is None:
        return
    if report.failed:
        entry["passed"] = False
    elif report.when == "call" and report.passed and entry["passed"] is None:
        entry["passed"] = True


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        if entry["passed"] is True:
            verdict = "PASS"
        elif entry["passed"] is False:
            verdict = "FAIL"
        else:
            verdict = "NOT RUN"
        note = f" - {entry['note']}" if entry["note"] else ""
        terminalreporter.write_line(f"criterion {number}: {verdict}{note}")
