import pytest

from vhcert import corpus


@pytest.fixture(scope="session")
def lam():
    return corpus.load("lambda")


@pytest.fixture(scope="session")
def delta():
    return corpus.load("delta")


@pytest.fixture(scope="session")
def sigma():
    return corpus.load("sigma")
