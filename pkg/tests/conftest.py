import pytest

from uavnoma.config import SystemConfig, dbm_to_watts

ACCEPTANCE_LINES = []


@pytest.fixture
def table1():
    return SystemConfig()


@pytest.fixture
def single_cluster():
    return SystemConfig().with_L(1)


@pytest.fixture
def noisy_hop1():
    """One cluster with a noisy first hop so that hop-1 outage is not negligible."""
    return SystemConfig(sigma2_l=dbm_to_watts(-50.0), p_t=dbm_to_watts(10.0)).with_L(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
