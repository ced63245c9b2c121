import pytest

from multiorder.groups import Z, Z2, FiniteSubset
from multiorder.tilings import instance_from_anchor, z2_dyadic_spec, z_odometer_spec
from multiorder.arrays import THUE_MORSE, generate_sample


@pytest.fixture(scope="session")
def z_spec_small():
    return z_odometer_spec((2, 4, 8, 16))


@pytest.fixture(scope="session")
def z_spec_coding():
    return z_odometer_spec((16, 64, 256, 1024))


@pytest.fixture(scope="session")
def z_instance_straight(z_spec_coding):
    # digits (8, 1, 1, 1): interior at every level
    return instance_from_anchor(z_spec_coding, 4, anchor=(344,))


@pytest.fixture(scope="session")
def dyadic_spec():
    return z2_dyadic_spec(5)


@pytest.fixture(scope="session")
def tm_sample():
    return generate_sample(
        THUE_MORSE, 3, {"kind": "interval", "lo": -1500, "hi": 1500}, floors=2
    )


@pytest.fixture
def unit_cross():
    return FiniteSubset.make(Z2, [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])


@pytest.fixture
def z_pm1():
    return FiniteSubset.make(Z, [(-1,), (0,), (1,)])
