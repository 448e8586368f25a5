import numpy as np
import pytest
from hypothesis import settings
from qdeform.qlattice.lattice import build_lattice

# numba compiles on first call; keep deadlines off
settings.register_profile('qdeform', max_examples = 40, deadline = None)
settings.load_profile('qdeform')

@pytest.fixture
def lattice_q05():
    return build_lattice(1., 0.5, 12)

@pytest.fixture
def lattice_q2():
    return build_lattice(4., 2., 10)

@pytest.fixture
def rng():
    return np.random.default_rng(12345)
