import os
import re

import pytest
from hypothesis import settings

# every Pfaffian computed during the test run is checked against a determinant
os.environ.setdefault("STEPWISE_VERIFY_PF", "1")

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" and outcome != "error":
                continue
            m = _CRITERION.search(rep.nodeid)
            if m:
                k = int(m.group(1))
                status = "PASS" if outcome == "passed" else "FAIL"
                # parametrized criteria fail if any case fails
                if rows.get(k, (None, "PASS"))[1] == "FAIL":
                    status = "FAIL"
                rows[k] = (m.group(2).replace("_", " "), status)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(rows):
        name, status = rows[k]
        terminalreporter.write_line(f"criterion {k} [{status}] {name}")


@pytest.fixture(scope="session")
def systems():
    from stepwise.rootsys import build_system

    cache = {}

    def get(family, rank):
        key = (family, rank)
        if key not in cache:
            cache[key] = build_system(key)
        return cache[key]

    return get
