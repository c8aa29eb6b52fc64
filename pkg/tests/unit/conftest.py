# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Fixtures for engine unit tests."""

import pytest

import charpoly


@pytest.fixture(scope="session")
def engine1():
    return charpoly.CharacteristicEngine(1)


@pytest.fixture(scope="session")
def engine2():
    return charpoly.CharacteristicEngine(2)


@pytest.fixture(scope="session")
def engine3():
    return charpoly.CharacteristicEngine(3)
