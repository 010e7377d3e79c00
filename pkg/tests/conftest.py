import sys

import numpy as np
import pytest

from crenrich.meshkit import Triangle2D
from crenrich.verify import random_triangles


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tri():
    return Triangle2D((0.1, -0.2), (1.3, 0.4), (0.2, 0.9))


@pytest.fixture
def tris(rng):
    return random_triangles(12, rng)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
