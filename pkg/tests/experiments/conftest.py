import pytest

from zenochain.model import ChainParams


@pytest.fixture
def short_chain():
    return ChainParams(sites=5)


@pytest.fixture
def chain15():
    return ChainParams(sites=15)
