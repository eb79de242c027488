# tests/conftest.py
# Author: besovlab maintainers
# Date: 17 October 2026
# Description: Shared grid functions for the test suite.

import pytest

from besovlab import config
from besovlab.gridfn import make_grid_function


@pytest.fixture(autouse=True)
def single_thread():
    config.set_threads(1)
    yield
    config.set_threads(None)


@pytest.fixture
def indicator_fn():
    """1_[0,1] at spacing 0.01; 101 samples equal to one."""
    return make_grid_function('indicator(0,1)', (-1.0, 2.0), 0.01)


@pytest.fixture
def tent_fn():
    return make_grid_function('tent(0,1)', (-2.0, 2.0), 1e-3)


@pytest.fixture
def bump_fn():
    return make_grid_function('bump(0,1)', (-2.0, 2.0), 1e-3)
