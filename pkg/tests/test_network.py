import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hdrelay.network import (
    ABSENT,
    ExponentMatrix,
    channel_submatrix,
    cut_from_index,
    index_from_cut,
    index_from_state,
    masked_submatrix,
    realize_channel,
    state_from_index,
    submatrix_labels,
    to_exact,
    unmasked_submatrix,
)

from conftest import exponent_matrices


def test_state_and_cut_indices():
    assert state_from_index(7, 3) == (1, 1, 0)
    assert state_from_index(1, 3) == (0, 0, 0)
    assert state_from_index(8, 3) == (1, 1, 1)
    assert cut_from_index(7, 3) == {1, 2}
    assert cut_from_index(1, 3) == frozenset()
    assert cut_from_index(8, 3) == {1, 2, 3}


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, 2 ** n))))
def test_index_round_trip(nj):
    n, j = nj
    assert index_from_state(state_from_index(j, n)) == j
    assert index_from_cut(cut_from_index(j, n), n) == j


@pytest.mark.parametrize("j,n", [(0, 2), (5, 2), (1, 0)])
def test_bad_index(j, n):
    with pytest.raises(ValueError):
        state_from_index(j, n)


def test_to_exact():
    assert to_exact(0.1) == Fraction(1, 10)
    assert to_exact("3/2") == Fraction(3, 2)
    assert to_exact(np.int64(4)) == 4
    with pytest.raises(TypeError):
        to_exact(True)
    with pytest.raises(ValueError):
        to_exact(float("inf"))


def test_matrix_validation():
    with pytest.raises(ValueError):
        ExponentMatrix.from_rows([[0, -1], [1, 1]])
    with pytest.raises(ValueError):
        ExponentMatrix(2, ((0, 1), (1, 1)))
    with pytest.raises(ValueError):
        ExponentMatrix.from_dict({"beta": [[0]]})


def test_one_based_access(one_relay):
    assert one_relay[1, 2] == 3 and one_relay[2, 1] == 2 and one_relay.direct == 1


def test_masks_one_relay(one_relay):
    w = masked_submatrix(one_relay, set(), [0])
    assert w.weights == ((3,), (1,))
    w = masked_submatrix(one_relay, {1}, [0])
    assert w.weights == ((ABSENT, 1),)
    w = masked_submatrix(one_relay, {1}, [1])
    assert w.weights == ((2, 1),)


def test_labels_put_the_end_nodes_last():
    assert submatrix_labels(3, {2}) == ((1, 3, 4), (2, 4))


@given(exponent_matrices())
def test_mask_rules(B):
    n = B.n_relays
    for i in range(1, 2 ** n + 1):
        cut = cut_from_index(i, n)
        full = unmasked_submatrix(B, cut)
        for j in range(1, 2 ** n + 1):
            s = state_from_index(j, n)
            w = masked_submatrix(B, cut, s)
            assert w.shape == full.shape
            for r, lab in enumerate(w.row_labels):
                for c, col in enumerate(w.col_labels):
                    masked = (lab <= n and s[lab - 1]) or (col <= n and not s[col - 1])
                    if masked:
                        assert w.weights[r][c] is ABSENT
                    else:
                        assert w.weights[r][c] == full.weights[r][c]
            # source column and destination row never masked
            assert w.weights[-1][-1] == B.direct


@given(exponent_matrices())
def test_json_and_csv_round_trip(B):
    assert ExponentMatrix.from_json(B.to_json()) == B
    assert ExponentMatrix.from_csv(B.to_csv()) == B
    assert json.loads(B.to_json())["n_relays"] == B.n_relays


def test_float_mode_round_trip(one_relay):
    f = one_relay.to_float()
    assert not f.exact and f[1, 2] == 3.0
    assert f.with_mode("exact") == one_relay


def test_realize_channel():
    B = ExponentMatrix.from_rows([[0, 2], [0, 1]])
    H = realize_channel(B, 100, seed=3)
    assert abs(H.gains[0, 1]) ** 2 == pytest.approx(1e4)
    assert abs(realize_channel(B, 1e6, 3).gains[1, 0]) ** 2 == pytest.approx(1.0)
    assert np.array_equal(H.gains, realize_channel(B, 100, 3).gains)
    assert H.gains[0, 0] == 0
    with pytest.raises(ValueError):
        realize_channel(B, 1.0, 0)


def test_channel_submatrix_masks_links(one_relay):
    H = realize_channel(one_relay, 1e3, 0)
    sub = channel_submatrix(H, {1}, [0])
    assert sub[0, 0] == 0 and sub[0, 1] != 0
    assert np.all(channel_submatrix(H, {1}, None) != 0)
