"""Shared fixtures and hypothesis profiles"""

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from loguru import logger

from src.systems.catalog import make_critical, make_logistic, make_mobius

settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=50, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))

np.seterr(over="ignore", under="ignore")


@pytest.fixture(autouse=True)
def quiet_logs():
    logger.remove()
    yield


@pytest.fixture
def critical():
    return make_critical(0.5j, 0.6)


@pytest.fixture
def mobius():
    return make_mobius(1.2 * np.exp(1j), 0.5)


@pytest.fixture
def logistic():
    return make_logistic(0.6)
