import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

EXTENDED = os.environ.get("ARTIFACT_EXTENDED", "") not in ("", "0")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; shown again in the terminal summary."""

    def report(n, ok, detail):
        status = {True: "PASS", False: "FAIL", None: "NOT RUN"}[ok]
        line = f"criterion {n}: {status}  {detail}"
        _CRITERIA.setdefault(n, []).append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        for line in _CRITERIA[n]:
            terminalreporter.write_line(line)
