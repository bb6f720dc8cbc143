import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo runs")
