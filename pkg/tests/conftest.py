from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hdrelay.closedform2 import TwoRelayParams
from hdrelay.network import ABSENT, ExponentMatrix

tenths = st.integers(0, 30).map(lambda k: Fraction(k, 10))


@st.composite
def exponent_matrices(draw, max_relays=3):
    n = draw(st.integers(1, max_relays))
    rows = [[draw(tenths) for _ in range(n + 1)] for _ in range(n + 1)]
    for i in range(n):
        rows[i][i] = Fraction(0)
    return ExponentMatrix.from_rows(rows)


@st.composite
def weight_matrices(draw, max_side=5, absent=True):
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(1, max_side)) if r else 0
    cell = st.one_of(st.just(ABSENT), tenths) if absent else tenths
    return tuple(tuple(draw(cell) for _ in range(c)) for _ in range(r))


two_relay_params = st.builds(TwoRelayParams, tenths, tenths, tenths, tenths, tenths, tenths)


@pytest.fixture
def one_relay():
    """beta_s1 = 3, beta_1d = 2, direct link 1."""
    return ExponentMatrix.from_rows([[0, 3], [2, 1]])


@pytest.fixture
def symmetric_pair():
    return TwoRelayParams.symmetric(2, Fraction(3, 2), 0).to_matrix()


@pytest.fixture
def line2():
    """source -> relay 1 -> relay 2 -> destination, every other link absent (0)."""
    return ExponentMatrix.from_rows([[0, 0, 2], [2, 0, 0], [0, 2, 0]])
