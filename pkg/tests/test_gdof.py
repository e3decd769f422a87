from fractions import Fraction

import pytest
from hypothesis import given, settings

from hdrelay.gdof import (
    build_coefficient_matrix,
    fd_gdof,
    gdof,
    minimum_support_solution,
    solve_gdof,
    solve_gdof_restricted,
)
from hdrelay.mwbm import max_weight_matching
from hdrelay.network import ExponentMatrix, cut_from_index, masked_submatrix, state_from_index

from conftest import exponent_matrices


def test_one_relay_coefficients(one_relay):
    a = build_coefficient_matrix(one_relay)
    assert (a[1, 1], a[2, 1], a[2, 2], a[1, 2]) == (3, 1, 2, 1)


def test_one_relay_gdof(one_relay):
    sol = gdof(one_relay)
    assert sol.d == Fraction(5, 3)
    assert sol.lambdas == (Fraction(1, 3), Fraction(2, 3))
    assert fd_gdof(one_relay) == 2


def test_symmetric_pair(symmetric_pair):
    sol = gdof(symmetric_pair)
    assert sol.d == Fraction(9, 5)
    assert sol.lambdas == (0, Fraction(3, 5), Fraction(2, 5), 0)
    assert sol.support_size == 2
    assert fd_gdof(symmetric_pair) == 2
    assert sol.to_dict()["gdof"] == "9/5"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_relays_useless_without_links(n):
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    rows[n][n] = 1
    B = ExponentMatrix.from_rows(rows)
    assert gdof(B).d == 1 and fd_gdof(B) == 1
    assert minimum_support_solution(build_coefficient_matrix(B)).support_size == 1


def test_line_network_pipelines_with_two_states(line2):
    # relay 2 forwards while relay 1 listens, so states 01 and 10 suffice
    a = build_coefficient_matrix(line2)
    sol = minimum_support_solution(a)
    assert sol.d == 1 and sol.support_size == 2
    assert sol.schedule.support() == (2, 3)
    assert all(solve_gdof_restricted(a, set(range(1, 5)) - {j}).d == 0 for j in range(1, 5))
    heavy = max(range(1, 5), key=lambda j: sol.lambdas[j - 1])
    assert solve_gdof_restricted(a, {heavy}).d < sol.d


def test_restriction_errors(one_relay):
    a = build_coefficient_matrix(one_relay)
    with pytest.raises(ValueError):
        solve_gdof_restricted(a, {1, 2})
    with pytest.raises(ValueError):
        solve_gdof_restricted(a, {3})
    assert solve_gdof_restricted(a, set()) == solve_gdof(a)


@settings(max_examples=60, deadline=None)
@given(exponent_matrices())
def test_lp_properties(B):
    n = B.n_relays
    a = build_coefficient_matrix(B)
    for i in range(1, 2 ** n + 1):
        for j in range(1, 2 ** n + 1):
            w = masked_submatrix(B, cut_from_index(i, n), state_from_index(j, n))
            assert a[i, j] == max_weight_matching(w).value
    sol = solve_gdof(a)
    assert B.direct <= sol.d <= fd_gdof(B)
    assert sum(sol.lambdas) == 1
    assert sol.support_size <= sol.tight_count
    fl = solve_gdof(build_coefficient_matrix(B.to_float()))
    assert fl.d == pytest.approx(float(sol.d), abs=1e-9)
    small = minimum_support_solution(a)
    assert small.d == sol.d and small.support_size <= sol.support_size
    # forcing more states to zero can only lose
    if 2 ** n > 2:
        assert solve_gdof_restricted(a, {1}).d >= solve_gdof_restricted(a, {1, 2}).d


def test_float_mode_support_threshold(symmetric_pair):
    sol = gdof(symmetric_pair.to_float())
    assert sol.solver_mode == "float"
    assert sol.d == pytest.approx(1.8) and sol.support_size == 2
