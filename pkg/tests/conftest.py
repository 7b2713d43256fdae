import pytest

from stringkit.machines import build_registry


@pytest.fixture(scope="session")
def registry():
    return build_registry()
