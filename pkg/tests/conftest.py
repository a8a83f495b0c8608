import numpy as np
import pytest

from soliton_forge import SolitonSpec, make_builtin_warp


@pytest.fixture(scope="session")
def euclidean_warp():
    return make_builtin_warp("rotational", 0.0)


@pytest.fixture(scope="session")
def hyperbolic_warp():
    return make_builtin_warp("rotational", -1.0)


@pytest.fixture(scope="session")
def busemann_warp():
    return make_builtin_warp("busemann", -1.0)


@pytest.fixture(scope="session")
def equidistant_warp():
    return make_builtin_warp("equidistant", -1.0)


@pytest.fixture(scope="session")
def hyperbolic_bowl_spec(hyperbolic_warp):
    return SolitonSpec(c=1.0, n=2, family="bowl", warp=hyperbolic_warp)


@pytest.fixture(scope="session")
def euclidean_bowl_spec(euclidean_warp):
    return SolitonSpec(c=1.0, n=2, family="bowl", warp=euclidean_warp)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
