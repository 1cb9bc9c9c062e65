import sys

import pytest
from gmpy2 import mpq
from hypothesis import settings

from qsigma import fps

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def qctx():
    return fps.make_context({}, 12)


@pytest.fixture
def dual_ctx():
    return fps.make_context({"c": 1, fps.EPS: (0, 2)}, 10)


def R(p, q=1):
    return mpq(p, q)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: takes tens of seconds")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
