import pytest

from zscheme.exactalg import WeightedRing


@pytest.fixture
def r1():
    return WeightedRing.of("x1:2, v:2")


@pytest.fixture
def p2_ring():
    return WeightedRing.of("x1:2, x2:4, v:2")


@pytest.fixture
def p3_ring():
    return WeightedRing.of("x1:2, x2:4, x3:6")
