import random

import pytest

from ffmoments.galois import field


@pytest.fixture(scope="session")
def f3():
    return field(3)


@pytest.fixture(scope="session")
def f5():
    return field(5)


@pytest.fixture(scope="session")
def f9():
    return field(9)


@pytest.fixture
def rng():
    return random.Random(20240817)
