import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


@pytest.fixture(params=["r1", "r2", "se2", "so3", "se2xr2"])
def any_group(request):
    from groupflow import make_group

    return make_group(request.param)


def randomize_output_layer(net, rng, scale=0.5):
    """Give the zero-initialized last layer nontrivial values for tests."""
    net.weights[-1][:] = scale * rng.standard_normal(net.weights[-1].shape)
    net.biases[-1][:] = scale * rng.standard_normal(net.biases[-1].shape)
    return net
