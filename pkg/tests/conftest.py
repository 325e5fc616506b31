import random
from fractions import Fraction

import pytest

from orbitlab.scalar import LocalField


@pytest.fixture
def lf3():
    return LocalField(3, Fraction(2))


@pytest.fixture
def lf3_ram():
    return LocalField(3, Fraction(3))


@pytest.fixture
def rng():
    return random.Random(20240824)
