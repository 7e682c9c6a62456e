import numpy as np
import pytest

from trident47 import mechanism


@pytest.fixture
def q0():
    return mechanism.reference_configuration()


@pytest.fixture
def rng():
    return np.random.default_rng(0)
