"""Shared test plumbing: the soundness oracle and the acceptance summary.

A soundness violation anywhere fails the run, whichever test produced it.
"""
from __future__ import annotations

import pytest

from oracle import SOUNDNESS, install

install()

_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if rep.failed:
        msg = str(rep.longrepr.reprcrash.message) if hasattr(rep.longrepr, "reprcrash") else ""
        detail = (detail + "; " if detail else "") + msg.splitlines()[0] if msg else detail
    _criteria[number] = (title, "PASS" if rep.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_criteria):
            title, verdict, detail = _criteria[n]
            terminalreporter.write_line(f"criterion {n} {title}: {verdict}  {detail}")
    terminalreporter.write_line(
        f"soundness oracle: {SOUNDNESS['accepted']} accepted proofs folded and checked, "
        f"{len(SOUNDNESS['violations'])} non-tautological")


def pytest_sessionfinish(session, exitstatus):
    if SOUNDNESS["violations"] and exitstatus == 0:
        session.exitstatus = 1
