import pytest

from ddrsim.geometry import build_layout


@pytest.fixture(scope="session")
def layout_120_20():
    """The reference three-ring layout used across the suite."""
    return build_layout(120.0, 20.0)
