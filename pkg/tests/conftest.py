import numpy as np
import pytest

from ffbt.cases import C2_BUMP
from ffbt.oracle import QuadratureSpec


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def bump():
    return C2_BUMP


@pytest.fixture(scope="session")
def bump_rule():
    return QuadratureSpec(center=C2_BUMP.center, radius=C2_BUMP.radius)


def random_field(rng, L, real=False):
    vals = rng.normal(size=(L, L))
    if not real:
        vals = vals + 1j * rng.normal(size=(L, L))
    return vals
