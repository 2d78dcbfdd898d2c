import os
import random

import pytest
from hypothesis import settings

from latlog import bundled_lattice

settings.register_profile("ci", max_examples=60, derandomize=True, deadline=None)
settings.load_profile("ci")

SEED = int(os.environ.get("LATLOG_TEST_SEED", "20240801"))


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def classical():
    return bundled_lattice("classical")


@pytest.fixture(scope="session")
def classical_0():
    return bundled_lattice("classical-0")


@pytest.fixture(scope="session")
def classical_1():
    return bundled_lattice("classical-1")


@pytest.fixture(scope="session")
def classical_01():
    return bundled_lattice("classical-01")


@pytest.fixture(scope="session")
def godel3():
    return bundled_lattice("godel3")


@pytest.fixture(scope="session")
def luka3():
    return bundled_lattice("lukasiewicz3")


@pytest.fixture(scope="session")
def three_01():
    return bundled_lattice("three-01")


@pytest.fixture(scope="session")
def three_0a():
    return bundled_lattice("three-0a")


@pytest.fixture(scope="session")
def mc():
    return bundled_lattice("mc")


@pytest.fixture(scope="session")
def diamond():
    return bundled_lattice("diamond")
