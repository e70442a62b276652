import pytest
from hypothesis import settings

from rankbench import builtin_catalog, builtin_scenarios

settings.register_profile("suite", max_examples=100, deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def desk_catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def sims():
    return {s.name: s for s in builtin_scenarios()}
