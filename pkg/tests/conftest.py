import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from heckebcz import make_context  # noqa: E402
from heckebcz.stats import strip_sweep  # noqa: E402

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def big_sweeps():
    """Sweeps over [0, 1] at tau = 1000 for q = 3 and 5 (shared by several criteria)."""
    cache = {}

    def get(q):
        if q not in cache:
            cache[q] = strip_sweep(make_context(q), 1000, (0, 1))
        return cache[q]

    return get


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
