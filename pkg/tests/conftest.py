import random

import pytest

from app.services.ring_core import Integers, IntegersModN, QuadraticOrder
from app.utils.cache import clear_all_caches


@pytest.fixture(autouse=True)
def clean_caches():
    """
    Fixture that clears the ring, verdict and report caches around every test.
    """
    clear_all_caches()
    yield
    clear_all_caches()


@pytest.fixture
def ZZ():
    return Integers()


@pytest.fixture
def gaussian():
    return QuadraticOrder(1)


@pytest.fixture
def z6():
    return IntegersModN(6)


@pytest.fixture
def rng():
    return random.Random(20240601)
