import pytest

from paraeval.semantic import reset_providers


@pytest.fixture(autouse=True)
def _fresh_providers():
    # the provider registry enforces dim consistency within one run; tests
    # spin up providers of many widths, so each test gets a clean registry
    reset_providers()
    yield
