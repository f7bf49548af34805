import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from gerbelab import (
    cover,
    cyclic_group,
    symmetric_group,
    trivial_group,
    validate_crossed_module,
)

FIXTURES = pathlib.Path(__file__).parent.parent / "fixtures"
DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def z1():
    return trivial_group("z1")


@pytest.fixture(scope="session")
def z2():
    return cyclic_group(2, "z2")


@pytest.fixture(scope="session")
def z3():
    return cyclic_group(3, "z3")


@pytest.fixture(scope="session")
def z4():
    return cyclic_group(4, "z4")


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3, "s3")


@pytest.fixture(scope="session")
def h_z2(z1, z2):
    """Crossed module 1 -> Z2."""
    return validate_crossed_module(z1, z2, [0], [[0], [0]])


@pytest.fixture(scope="session")
def h_z3(z1, z3):
    """Crossed module 1 -> Z3."""
    return validate_crossed_module(z1, z3, [0], [[0]] * 3)


@pytest.fixture(scope="session")
def g_z2(z1, z2):
    """Crossed module Z2 -> 1."""
    return validate_crossed_module(z2, z1, [0, 0], [[0, 1]])


@pytest.fixture(scope="session")
def circ3():
    return cover(3, [[0, 1], [1, 2], [0, 2]])


@pytest.fixture(scope="session")
def singles3():
    return cover(3, [[0], [1], [2]])


@pytest.fixture(scope="session")
def pt2():
    return cover(1, [[0], [0]])
