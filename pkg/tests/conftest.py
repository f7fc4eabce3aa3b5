import numpy as np
import pytest

from src.models.network import DecoderParams
from src.models.quantum import CircuitParams
from src.service.interferometer import Interferometer


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow training oracles")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def interferometer4():
    return Interferometer.for_particles(4)


@pytest.fixture
def random_circuit(rng):
    return CircuitParams.initialize(rng, layers_enc=2, layers_dec=1, scale=1.0)


@pytest.fixture
def tiny_decoder(rng):
    return DecoderParams.initialize([5, 8, 2], rng)
