import math

import pytest

from twoway_qkd.rng import N_SLOTS, Slot


def make_draws(**named):
    """Per-round draw row with the named slots set and everything else 0.0."""
    row = [0.0] * N_SLOTS
    for name, value in named.items():
        row[Slot[name.upper()]] = value
    return row


def binomial_band(p, n, sigmas=6.0):
    """Half-width of a `sigmas`-sigma binomial band, never below one count."""
    return max(sigmas * math.sqrt(p * (1 - p) / n), 1.0 / n)


@pytest.fixture
def draws():
    return make_draws


# acceptance criteria: number -> (title, outcomes of the tests tagged with it)
_ACCEPTANCE: dict[int, tuple[str, list[str]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    _ACCEPTANCE.setdefault(number, (title, []))[1].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcomes = _ACCEPTANCE[number]
        verdict = "PASS" if outcomes and all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number:2d}. {title}")
