"""Maximum weighted bipartite matching via the Hungarian algorithm.

Weights are nonnegative, so padding a rectangular matrix with zero-weight
dummy edges turns the (possibly partial) maximum matching into a perfect
assignment on a square matrix. ABSENT edges are padded with weight 0 and
dropped from the reported pairs.

Works unchanged on ``int``, ``Fraction`` and ``float`` weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .network import ABSENT, MaskedWeightMatrix


@dataclass(frozen=True)
class Matching:
    value: object
    pairs: tuple[tuple[int, int], ...]  # 0-based (row, col) positions


def hungarian_min(cost) -> list[int]:
    """Min-cost assignment of every row of an n x m matrix, n <= m.

    Returns ``col_of_row``. Potential-based O(n^2 m) variant; ties are
    broken toward the lowest column index, so the result is deterministic.
    """
    n = len(cost)
    if n == 0:
        return []
    m = len(cost[0])
    if n > m:
        raise ValueError("hungarian_min needs rows <= cols")
    u = [0] * (n + 1)
    v = [0] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    cols = range(1, m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = None
            j1 = 0
            for j in cols:
                if used[j]:
                    continue
                cur = row[j - 1] - ui0 - v[j]
                mj = minv[j]
                if mj is None or cur < mj:
                    minv[j] = mj = cur
                    way[j] = j0
                if delta is None or mj < delta:
                    delta = mj
                    j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    col_of_row = [0] * n
    for j in cols:
        if p[j]:
            col_of_row[p[j] - 1] = j - 1
    return col_of_row


def assignment_value(weights):
    """MWBM value of a dense nonnegative matrix (ABSENT already replaced by 0)."""
    if not weights or not weights[0]:
        return 0
    if len(weights) > len(weights[0]):
        weights = [list(col) for col in zip(*weights)]
    cost = [[-x for x in row] for row in weights]
    cols = hungarian_min(cost)
    total = 0
    for r, c in enumerate(cols):
        total += weights[r][c]
    return total


def _validate(w: MaskedWeightMatrix) -> None:
    for row in w.weights:
        for x in row:
            if x is ABSENT:
                continue
            if isinstance(x, bool) or not isinstance(x, (int, float, Fraction)):
                try:
                    float(x)
                except (TypeError, ValueError):
                    raise TypeError(f"non-numeric weight {x!r}") from None
            if x < 0:
                raise ValueError(f"negative weight {x}; matching weights must be >= 0")


def max_weight_matching(w: MaskedWeightMatrix) -> Matching:
    """Maximum-weight matching over the present edges of ``w``.

    Among optimal matchings the one whose zero-padded square assignment has
    the lexicographically smallest column vector is returned. The
    tie-break is exact: weights are scaled to integers and a base-n digit
    penalty that can never outweigh a unit of weight is subtracted.
    """
    _validate(w)
    n_rows, n_cols = w.shape
    n = max(n_rows, n_cols)
    present = [(r, c) for r in range(n_rows) for c in range(n_cols) if w.present(r, c)]
    if not present:
        return Matching(0, ())
    exact = {rc: Fraction(w.weights[rc[0]][rc[1]]) for rc in present}
    scale = lcm(*(x.denominator for x in exact.values()))
    big = n ** n
    cost = []
    for r in range(n):
        digit = n ** (n - 1 - r)
        row = []
        for c in range(n):
            x = exact.get((r, c))
            gain = 0 if x is None else int(x * scale) * big
            row.append(c * digit - gain)
        cost.append(row)
    cols = hungarian_min(cost)
    pairs = tuple((r, c) for r, c in enumerate(cols) if (r, c) in exact)
    value = sum((w.weights[r][c] for r, c in pairs), start=0)
    return Matching(value, pairs)
