import os

import numpy as np
import pytest

DESK_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data", "desk")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def desk_dir():
    path = os.path.abspath(DESK_DIR)
    if not os.path.isdir(path):
        pytest.skip("bundled desk dataset not present")
    return path


@pytest.fixture
def small_plane(rng):
    """Smooth-plus-noise test plane, large enough for every family."""
    h, w = 54, 63
    yy, xx = np.mgrid[0:h, 0:w]
    base = 0.5 + 0.3 * np.sin(xx / 9.0) * np.cos(yy / 7.0)
    return np.clip(base + 0.05 * rng.standard_normal((h, w)), 0.0, 1.0)
