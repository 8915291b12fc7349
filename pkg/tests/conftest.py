from fractions import Fraction

import pytest

from qhred.freefield import FreeField
from qhred.reduction import SV_POINT, Reduction


@pytest.fixture(scope="session")
def sym():
    """Reduction with symbolic alpha and k."""
    return Reduction()


@pytest.fixture(scope="session")
def sv():
    return Reduction(*SV_POINT)


@pytest.fixture(scope="session")
def sv_free(sv):
    return FreeField(sv)


@pytest.fixture(scope="session")
def num():
    """A rational point away from every degenerate locus."""
    return Reduction(Fraction(3, 2), Fraction(-5, 7))
