import pytest

from vilenkin_lab.structure import VilenkinStructure


@pytest.fixture(scope="session")
def walsh3():
    return VilenkinStructure.from_pattern((2,), 3)


@pytest.fixture(scope="session")
def walsh6():
    return VilenkinStructure.from_pattern((2,), 6)


@pytest.fixture(scope="session")
def mixed232():
    return VilenkinStructure.from_m((2, 3, 2))


@pytest.fixture(scope="session")
def mixed2323():
    return VilenkinStructure.from_m((2, 3, 2, 3))
