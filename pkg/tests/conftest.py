import numpy as np
import pytest

from lhvkit import Scenario


@pytest.fixture
def chsh():
    return Scenario.chsh()


@pytest.fixture
def tripartite():
    return Scenario.uniform(3)


@pytest.fixture
def rng():
    # fixed seed protocol: every randomized test draws from default_rng(20240611)
    return np.random.default_rng(20240611)
