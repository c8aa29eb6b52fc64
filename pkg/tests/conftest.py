# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Fixtures for engine tests."""

import pytest


def pytest_addoption(parser):
    """Parse additional pytest options.

    Args:
        parser: Pytest parser.
    """
    parser.addoption(
        "--include-n3",
        action="store_true",
        help="also run the N=3 algebra checks, which take minutes",
    )


def pytest_configure(config):
    """Register markers.

    Args:
        config: Pytest config.
    """
    config.addinivalue_line("markers", "n3: symbolic checks at N=3, enabled by --include-n3")


def pytest_collection_modifyitems(config, items):
    """Skip N=3 checks unless requested.

    Args:
        config: Pytest config.
        items: Collected tests.
    """
    if config.getoption("--include-n3"):
        return
    skip = pytest.mark.skip(reason="needs --include-n3")
    for item in items:
        if "n3" in item.keywords:
            item.add_marker(skip)
