from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings

from hdrelay.mwbm import assignment_value, hungarian_min, max_weight_matching
from hdrelay.network import ABSENT, MaskedWeightMatrix
from hdrelay.oracle import brute_force_mwbm

from conftest import weight_matrices


def mw(rows):
    return MaskedWeightMatrix(tuple(tuple(r) for r in rows))


def test_small_examples():
    m = max_weight_matching(mw([[3, 1, 2]]))
    assert m.value == 3 and m.pairs == ((0, 0),)
    m = max_weight_matching(mw([[1, 3], [2, 1]]))
    assert m.value == 5 and set(m.pairs) == {(0, 1), (1, 0)}


def test_two_by_three_is_best_pair():
    b = [[Fraction(7, 10), 2, Fraction(1, 2)], [3, Fraction(11, 10), Fraction(5, 2)]]
    best = max(b[0][i] + b[1][j] for i in range(3) for j in range(3) if i != j)
    assert max_weight_matching(mw(b)).value == best


def test_empty_and_absent():
    assert max_weight_matching(mw([])).value == 0
    m = max_weight_matching(mw([[ABSENT, ABSENT], [ABSENT, ABSENT]]))
    assert m.value == 0 and m.pairs == ()


def test_rejects_negative_and_junk():
    with pytest.raises(ValueError):
        max_weight_matching(mw([[1, -1]]))
    with pytest.raises(TypeError):
        max_weight_matching(mw([["x"]]))


def test_ties_break_the_same_way():
    a = max_weight_matching(mw([[1, 1], [1, 1]]))
    b = max_weight_matching(mw([[1, 1], [1, 1]]))
    assert a == b and a.pairs == ((0, 0), (1, 1))


def test_hungarian_matches_permutations():
    cost = [[4, 1, 3], [2, 0, 5], [3, 2, 2]]
    cols = hungarian_min(cost)
    best = min(sum(cost[r][p[r]] for r in range(3)) for p in permutations(range(3)))
    assert sum(cost[r][c] for r, c in enumerate(cols)) == best


@settings(max_examples=300)
@given(weight_matrices())
def test_matching_invariants(rows):
    w = mw(rows)
    m = max_weight_matching(w)
    assert m.value == brute_force_mwbm(w)
    rs = [r for r, _ in m.pairs]
    cs = [c for _, c in m.pairs]
    assert len(set(rs)) == len(rs) and len(set(cs)) == len(cs)
    assert all(w.present(r, c) for r, c in m.pairs)
    assert m.value == sum((w.weights[r][c] for r, c in m.pairs), 0)


@given(weight_matrices(absent=False))
def test_transpose_and_fast_path(rows):
    w = mw(rows)
    v = max_weight_matching(w).value
    if rows:
        assert max_weight_matching(mw(list(zip(*rows)))).value == v
    assert assignment_value([list(r) for r in rows]) == v


def test_float_weights():
    assert max_weight_matching(mw([[0.5, 1.25], [2.0, 0.0]])).value == pytest.approx(3.25)
