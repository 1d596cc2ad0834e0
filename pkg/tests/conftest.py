import numpy as np
import pytest

from zeeman_pair.coupling import Geometry, coupling_from_tensor


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def generic_geometry():
    return Geometry(0.2, 1.0, 0.3)


@pytest.fixture
def generic_couplings(generic_geometry):
    return coupling_from_tensor(generic_geometry)
