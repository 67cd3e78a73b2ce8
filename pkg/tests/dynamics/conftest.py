import pytest

from zenochain.model import ApparatusParams, ChainParams, CompositeModel


@pytest.fixture
def chain15():
    return ChainParams(sites=15)


@pytest.fixture
def zeno_model(chain15):
    return CompositeModel(chain15, ApparatusParams(g=100, delta=0)).warm()


@pytest.fixture
def free_model(chain15):
    return CompositeModel(chain15, ApparatusParams(g=0))
