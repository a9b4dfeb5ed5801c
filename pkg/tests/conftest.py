import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from intrinsic_lp.grid_core import Grid

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=15, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def unit_grid():
    """[0, 1] with h = 1/256."""
    return Grid.uniform(0.0, 1.0, 257)


@pytest.fixture
def sym_grid():
    """[-1, 1] with h = 1/64, the default verification grid."""
    return Grid.uniform(-1.0, 1.0, 129)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
