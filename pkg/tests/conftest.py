import pytest
from hypothesis import HealthCheck, settings

from enrcov.examples import builtin_registry

settings.register_profile("enrcov", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("enrcov")


@pytest.fixture(scope="session")
def registry():
    return {s.name: s for s in builtin_registry()}


@pytest.fixture(scope="session")
def ex(registry):
    """Look up a builtin example by registry name."""
    return registry.__getitem__
