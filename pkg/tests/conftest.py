import pytest

from chordscan import CurveSpec

# Reference states used throughout the suite: quantum number 5 at hbar = 0.1,
# as the bare ring and after a shear of duration 0.1 under H = p + p^2 + p^3.
RING = CurveSpec(n=5, hbar=0.1, alpha=(0.0, 1.0, 1.0, 1.0), t=0.0)
SHEARED = CurveSpec(n=5, hbar=0.1, alpha=(0.0, 1.0, 1.0, 1.0), t=0.1)


@pytest.fixture
def ring():
    return RING


@pytest.fixture
def sheared():
    return SHEARED
