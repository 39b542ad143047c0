import numpy as np
import pytest

from rit3 import RadarGeometry, build_operator_pair


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


def random_tensor(rng, dims):
    return rng.standard_normal(dims) + 1j * rng.standard_normal(dims)


@pytest.fixture(scope="session")
def geom_small():
    """Nyquist-sampled (dx = lambda/2) far-field geometry, 16x16x32."""
    return RadarGeometry(nx=16, ny=16, nr=32, dx=0.15, dy=0.15,
                         fc=1e9, bw=0.2e9, z0=10.0)


@pytest.fixture(scope="session")
def geom_partial():
    """Sub-quarter-wavelength sampling: the propagating support is a
    proper subset of the spectral grid (fraction ~0.35)."""
    return RadarGeometry(nx=16, ny=16, nr=16, dx=0.05, dy=0.05,
                         fc=1e9, bw=0.2e9, z0=5.0)


@pytest.fixture(scope="session")
def op_small(geom_small):
    return build_operator_pair(geom_small)


@pytest.fixture(scope="session")
def op_partial(geom_partial):
    return build_operator_pair(geom_partial)
