import pytest

from chordscope.core import DualGridPair


@pytest.fixture(scope="session")
def grids():
    """Moderate grid pair used by most state-level tests."""
    return DualGridPair(256, 8.0, 1.0)


@pytest.fixture(scope="session")
def pgrid(grids):
    return grids.position_grid()
