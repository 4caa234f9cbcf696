"""
Shared fixtures for the test suite.

Usage:
    pytest tests
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "backend"))

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from core.linalg import Tol  # noqa: E402
from services.generators import fixture_f1, fixture_f2, ordinary_triple, random_instance  # noqa: E402

GRID = [1j, -1j, 2j, 1 + 1j, -1 - 2j]


@pytest.fixture
def tol():
    return Tol()


@pytest.fixture
def grid():
    return list(GRID)


@pytest.fixture
def f1_triple():
    H, A = fixture_f1()
    return ordinary_triple(H, A)


@pytest.fixture
def f2_triple():
    space, A = fixture_f2()
    return ordinary_triple(space, A)


@pytest.fixture
def symmetric_instance():
    return random_instance("symmetric", 4, 11)


@pytest.fixture
def qsc_instance():
    return random_instance("qsc", 4, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
