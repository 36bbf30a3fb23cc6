"""Shared fixtures for the theta-iwasawa tests."""

import numpy as np
import pytest

from iwasawa.algebra import LambdaRing


@pytest.fixture
def ring3():
    """p = 3, N = 12, enough truncation for levels <= 3."""
    return LambdaRing.for_levels(3, 12, 3)


@pytest.fixture
def ring5():
    """p = 5, N = 20, enough truncation for levels <= 2."""
    return LambdaRing.for_levels(5, 20, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
