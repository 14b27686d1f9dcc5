import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from prevbounds.core import Assessment, Entry, Partition

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def part3():
    return Partition.of_size(3)


@pytest.fixture
def x43(part3):
    """The three-atom gamble (-1, 1, 2)."""
    return part3.gamble([-1, 1, 2])


@pytest.fixture
def a43(part3, x43):
    """lpr(X) = 0.75 on X = (-1, 1, 2)."""
    return Assessment(part3, [Entry("X", x43, 0.75)])


@pytest.fixture
def doc43_text():
    return b'{"atoms": ["w1","w2","w3"], "gambles": {"X": [-1,1,2]}, "lower": {"X": 0.75}, "upper": {}}'
