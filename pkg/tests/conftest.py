import random

import pytest

from bezivin.exactnum import GroupSpec
from bezivin.parser import from_str
from bezivin.settings import Limits

CATALAN = "1/((1-3*x1)*(1-x2)) - 1/((1-x1)*(1-2*x2)) - 1/((1-x1)*(1-x2))"

PIECEWISE_EXAMPLE = (
    "1/(1-2*x1*x2) + 1/(1-3*x1*x2) + x2/((1-3*x1*x2)^2*(1-5*x2))"
    " + x1/((1-x1)*(1-x1*x2))"
)


@pytest.fixture
def rng():
    return random.Random(20231018)


@pytest.fixture
def limits():
    return Limits(bound=10, verify_bound=6)


@pytest.fixture
def group_23():
    return GroupSpec([2, 3])


@pytest.fixture
def catalan():
    return from_str(CATALAN)


@pytest.fixture
def piecewise_example():
    return from_str(PIECEWISE_EXAMPLE)
