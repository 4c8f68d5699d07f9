import pytest

from wfts.generators import grant_request, minepump_lite, taxi
from wfts.model import expand_lengths


@pytest.fixture(scope="session")
def taxi1():
    return taxi(1)


@pytest.fixture(scope="session")
def taxi1_expanded():
    return expand_lengths(taxi(1))


@pytest.fixture(scope="session")
def grantreq():
    return grant_request()


@pytest.fixture(scope="session")
def minepump():
    return minepump_lite()
