import os
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = {
    1: "monomial counts",
    2: "gr39 rational interpolation",
    3: "2x2x2x2 interpolation",
    4: "product-of-roots factorizations",
    5: "power-sum term tables",
    6: "trace calibration",
    7: "SL-invariance",
    8: "projection identities",
    9: "semi-simple consistency",
    10: "multi-modular round trip",
    11: "gr48 single-prime run",
}

_outcomes: dict[int, list[str]] = defaultdict(list)


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run long computations (the 15,976-column gr48 nullspace)")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow") or os.environ.get("DISCFORGE_RUN_SLOW") == "1":
        return
    skip = pytest.mark.skip(reason="long run; enable with --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            state = "xfail" if rep.skipped else "XPASS"
        elif rep.skipped:
            state = "skip"
        else:
            state = "pass" if rep.passed else "FAIL"
        _outcomes[marker.args[0]].append(state)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        states = _outcomes.get(n)
        if not states:
            continue
        if "FAIL" in states or "XPASS" in states:
            verdict = "FAIL"
        elif "pass" in states:
            verdict = "PASS"
        else:
            verdict = "SKIP"
        notes = []
        if "xfail" in states:
            notes.append(f"{states.count('xfail')} literal reading(s) xfail as documented")
        if "skip" in states:
            notes.append(f"{states.count('skip')} skipped")
        extra = f"  ({'; '.join(notes)})" if notes else ""
        tr.write_line(f"criterion {n:2d} {verdict}: {title}{extra}")
