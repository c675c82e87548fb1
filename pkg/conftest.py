"""Shared fixtures and the hypothesis profile for the test suite."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from lattice_core import family, make_lattice, DirectSumDescriptor, FamilyDescriptor

settings.register_profile(
    'lattice',
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('lattice')

CORPUS = Path(__file__).parent / 'corpus'


@pytest.fixture
def corpus():
    return CORPUS


@pytest.fixture
def e8():
    return family('E8')


@pytest.fixture
def a2():
    return family('An', 2)


def zn(n):
    return family('Zn', n)


def e8_plus_z(m):
    return make_lattice(DirectSumDescriptor((FamilyDescriptor('E8', 8), FamilyDescriptor('Zn', m))))
