import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import helpers

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return np.random.default_rng(2214)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if helpers.GATE_LINES:
        terminalreporter.section("gate summary")
        for line in helpers.GATE_LINES:
            terminalreporter.write_line(line)
