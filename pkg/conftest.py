import pytest


@pytest.fixture
def root(tmp_path):
    """Temporary working directory for test_functionality.test_pipeline."""
    return str(tmp_path)
