import math

import numpy as np
import pytest

from nhqsl.biortho import build_biorthogonal, make_spectrum, shift_spectrum
from nhqsl.models import WptParams, wpt_matrix

SQRT115 = math.sqrt(11.5)
TAU_WPT = math.pi / (2.0 * SQRT115)


def random_spectrum(rng, dim, wmax=(0.5, 10.0), gmax=3.0):
    """Shifted spectrum with sorted omega', width in ``wmax`` and gamma' in [0, gmax]."""
    width = rng.uniform(*wmax)
    om = np.sort(np.concatenate([[0.0, width], rng.uniform(0, width, dim - 2)]))
    ga = rng.uniform(0, gmax, dim)
    ga[rng.integers(dim)] = 0.0
    return make_spectrum(om, ga - ga.min())


def random_matrix(rng, dim, scale=1.0):
    return scale * (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def wpt_sys():
    return build_biorthogonal(wpt_matrix(WptParams(1.0, 1.0, 2.5)))


@pytest.fixture(scope="session")
def wpt_spec(wpt_sys):
    return shift_spectrum(wpt_sys)
