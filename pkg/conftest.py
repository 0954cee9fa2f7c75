import numpy as np
import pytest

from src.qubit_core import matrices_from_bloch, random_bloch_arrays

SEED = 20240601


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def random_states(rng):
    """1000 random Bloch states as (t, n_x, n_y, n_z) arrays."""
    return random_bloch_arrays(rng, 1000)


@pytest.fixture
def random_matrices(random_states):
    return matrices_from_bloch(*random_states)
