import os
import sys
from functools import lru_cache

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dualcox.coxeter import build_system  # noqa: E402
from dualcox.isometry import coxeter_element  # noqa: E402
from dualcox.ncp import Window, affine_a1_window, build_interval  # noqa: E402


@lru_cache(maxsize=None)
def system(name):
    return build_system(name)


@lru_cache(maxsize=None)
def poset(name, word=None, depth=3, a1_k=None):
    """Cached interval; ``a1_k`` selects the affine A1 window with atoms a_-k..a_k+1."""
    s = system(name)
    word = tuple(range(s.rank)) if word is None else word
    w = coxeter_element(s, word)
    win = affine_a1_window(a1_k) if a1_k is not None else Window(depth)
    return build_interval(s, w, win)


@pytest.fixture
def S3():
    return poset("S3")


@pytest.fixture
def A1_window():
    # affine A1 with w = s1 s0 : x -> x + 2 and atoms a_-2 .. a_3
    return poset("affA1", (1, 0), a1_k=2)


# acceptance lines, filled by test_acceptance.report and printed after the run
RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
