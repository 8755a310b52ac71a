"""Shared fixtures: calibrated states and their decompositions."""

import pytest
import structlog

from src.source.pdc import schmidt_decompose
from src.source.presets import (
    CENTER_NM,
    STATE_B_MODE_SIGMA_NM,
    bell_jsa,
    state_a_jsa,
    state_b_jsa,
)
from src.spectral.grid import make_axis
from src.spectral.modes import ModeBasis


@pytest.fixture(autouse=True)
def reset_structlog():
    yield
    structlog.reset_defaults()


@pytest.fixture(scope="session")
def axis():
    return make_axis(CENTER_NM, 20.0, 512)


@pytest.fixture(scope="session")
def state_a():
    return state_a_jsa()


@pytest.fixture(scope="session")
def state_b():
    return state_b_jsa()


@pytest.fixture(scope="session")
def bell():
    return bell_jsa()


@pytest.fixture(scope="session")
def bell_basis():
    return ModeBasis.from_nm(CENTER_NM, STATE_B_MODE_SIGMA_NM)


@pytest.fixture(scope="session")
def schmidt_a(state_a):
    return schmidt_decompose(state_a)


@pytest.fixture(scope="session")
def schmidt_b(state_b):
    return schmidt_decompose(state_b)
