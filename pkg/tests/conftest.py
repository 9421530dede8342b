"""Shared fixtures for the test suite."""

from __future__ import annotations

import pytest
from hypothesis import settings

from instances import reference_instance

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def reference():
    return reference_instance()


@pytest.fixture(scope="session")
def demo_small():
    """Mid-size deterministic instance for cross-module tests."""
    from rakelink.demo_data import GeneratorConfig, generate

    return generate(GeneratorConfig(services_target=180, station_count=14, seed=11))
