import numpy as np
import pytest

from collective_qec.verify import random_density


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rand_rho(rng):
    def make(dim, pure=False):
        return random_density(rng, dim, pure=pure)

    return make
