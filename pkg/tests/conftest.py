import numpy as np
import pytest

SEED = 12345


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)
