import math

import numpy as np
import pytest

from nhgate.verify import builtin_paths

HALF_PI = math.pi / 2


@pytest.fixture(scope="session")
def family_paths():
    return builtin_paths()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
