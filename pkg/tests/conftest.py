import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from mellin_deconv import distributions as D
from mellin_deconv.mellin_core import default_tgrid, make_tgrid

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GAMMA = D.Gamma(1, 3)
WEIBULL = D.Weibull(1, 3)
BETA = D.Beta(10, 5)
LOGNORMAL = D.LogNormal(0, 1)
PARETO = D.Pareto(1, 1)
ALL_FAMILIES = [GAMMA, WEIBULL, BETA, LOGNORMAL, PARETO]


@pytest.fixture(scope="session")
def grid():
    return default_tgrid()


@pytest.fixture(scope="session")
def small_grid():
    return make_tgrid(5, 0.01)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
