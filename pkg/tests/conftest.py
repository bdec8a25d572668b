from fractions import Fraction as F

import pytest

from hgmtrace import normalize


@pytest.fixture(scope="session")
def quartic_datum():
    """The degree-4 weight-1 datum used for the reference quartic datum and benchmarks."""
    return normalize(
        (F(1, 4), F(1, 2), F(1, 2), F(3, 4)),
        (F(1, 3), F(1, 3), F(2, 3), F(2, 3)),
        F(1, 5),
    )


@pytest.fixture(scope="session")
def elliptic():
    """Factory for the degree-2 datum whose traces match y^2 = -x(x-1)(x-z)."""

    def make(z):
        return normalize((F(1, 2), F(1, 2)), (F(0), F(0)), z)

    return make
