import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from susykink import KinkSimulator  # noqa: E402


@pytest.fixture(scope="session")
def critical_l4():
    return KinkSimulator(4, 1.0)


@pytest.fixture(scope="session")
def critical_l3():
    return KinkSimulator(3, 1.0)


@pytest.fixture(scope="session")
def extreme_l3():
    return KinkSimulator(3, 0.0)
