"""Shared fixtures for the expensive builds.

Session scope keeps each class-set enumeration and level chain to one run
per test session; everything downstream of these fixtures is deterministic,
so sharing them cannot couple tests.
"""

import pytest

from hmfdb import pipeline
from hmfdb.quatalg import load_shipped_order, right_ideal_classes


@pytest.fixture(scope="session")
def d11():
    order = load_shipped_order("q_disc11")
    return order, right_ideal_classes(order)


@pytest.fixture(scope="session")
def d11_levels(d11):
    """Levels of norm 1 through 8 for the rational discriminant-11 algebra."""
    order, _ = d11
    levels = pipeline.build_database(order, 1, 8, 20)
    return {data.label: data for data in levels}


@pytest.fixture(scope="session")
def d5():
    order = load_shipped_order("d5_disc1")
    return order, right_ideal_classes(order)


@pytest.fixture(scope="session")
def d5_levels(d5):
    """All levels over Q(sqrt 5) up to norm 100; takes a few minutes."""
    order, _ = d5
    levels = pipeline.build_database(order, 1, 100, 20)
    return {data.label: data for data in levels}
