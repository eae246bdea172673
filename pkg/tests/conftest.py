import pytest

from paleylab.field import new_field

TEST_PRIMES = (13, 17, 29, 37, 53)


@pytest.fixture(scope="session")
def ctx13():
    return new_field(13)


@pytest.fixture(scope="session")
def contexts():
    return {p: new_field(p) for p in TEST_PRIMES}
