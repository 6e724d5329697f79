import pytest

from ratcheb.geometry import INF, CompactSet, PoleDivisor
from ratcheb.potential import GreenCache
from ratcheb.rational import RationalFn


@pytest.fixture
def interval():
    return CompactSet([(-1.0, 1.0)])


@pytest.fixture
def two_intervals():
    return CompactSet.from_literal("[-2,-0.5];[0.5,2]")


@pytest.fixture
def t3():
    """T_3(z) = 4z^3 - 3z."""
    return RationalFn.from_parts(PoleDivisor({INF: 3}), parts={INF: [-3.0, 0.0, 4.0]})


@pytest.fixture
def single_pole():
    """F(z) = -2 + 3/(2 - z) = (2z - 1)/(2 - z), the extremizer on [-1, 1] for D = {2}, x* = 2."""
    return RationalFn.from_parts(PoleDivisor({2.0: 1}), -2.0, {2.0: [3.0]})


@pytest.fixture
def cache():
    return GreenCache()
