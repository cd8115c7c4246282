import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from psidolab import GridSpec

settings.register_profile("psidolab", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("psidolab")

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def balanced(dim: int, N: int) -> GridSpec:
    return GridSpec(dim, N, math.sqrt(N * math.pi / 2))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
