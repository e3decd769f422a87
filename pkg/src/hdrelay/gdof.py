"""gDoF of a half-duplex relay network as a linear program.

Coefficient ``a[i][j]`` is the MWBM value of the exponent submatrix seen
across cut i while the relays are in state j. The gDoF is the value of
``max_lam min_i sum_j a[i][j] lam_j`` over schedules ``lam``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from math import lcm

import numpy as np

from .lp import solve_maxmin
from .mwbm import assignment_value, max_weight_matching
from .network import (
    ExponentMatrix,
    cut_from_index,
    state_from_index,
    unmasked_submatrix,
)

FLOAT_EPS = 1e-9
MAX_EXACT_RELAYS = 12


@dataclass(frozen=True)
class CoefficientMatrix:
    """Cut/state coefficients stored as ``numerators[i][j] / scale``.

    In exact mode the numerators are ints over a common integer scale, so
    the LP never has to touch ``Fraction`` objects; in float mode they are
    floats and ``scale`` is 1. Indexing ``a[i, j]`` is 1-based.
    """

    n_relays: int
    numerators: tuple[tuple, ...]
    scale: int = 1
    exact: bool = True

    @property
    def size(self) -> int:
        return 2 ** self.n_relays

    @cached_property
    def a(self) -> tuple[tuple, ...]:
        """0-based matrix of values (``Fraction`` in exact mode)."""
        if self.exact:
            return tuple(tuple(Fraction(v, self.scale) for v in row) for row in self.numerators)
        return self.numerators

    @cached_property
    def as_array(self) -> np.ndarray:
        return np.array(self.numerators, dtype=float) / self.scale

    def __getitem__(self, ij):
        i, j = ij
        v = self.numerators[i - 1][j - 1]
        return Fraction(v, self.scale) if self.exact else v


@dataclass(frozen=True)
class Schedule:
    lambdas: tuple

    def __post_init__(self):
        if any(x < 0 for x in self.lambdas):
            raise ValueError("schedule probabilities must be nonnegative")

    def support(self, eps=0) -> tuple[int, ...]:
        """1-based indices of the active states."""
        return tuple(j for j, x in enumerate(self.lambdas, start=1) if x > eps)


@dataclass(frozen=True)
class GdofSolution:
    d: object
    schedule: Schedule
    support_size: int
    tight_cuts: tuple[int, ...]
    solver_mode: str
    forced_zero: frozenset = field(default=frozenset())

    @property
    def tight_count(self) -> int:
        return len(self.tight_cuts)

    @property
    def lambdas(self) -> tuple:
        return self.schedule.lambdas

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            return x
        return {
            "gdof": enc(self.d),
            "lambda": [enc(x) for x in self.lambdas],
            "support_size": self.support_size,
            "tight_cuts": list(self.tight_cuts),
            "mode": self.solver_mode,
        }


def _relay_masks(n: int):
    # bit for relay k (1-based) in a state/cut index: MSB is relay 1
    return [1 << (n - k) for k in range(1, n + 1)]


def build_coefficient_matrix(B: ExponentMatrix) -> CoefficientMatrix:
    """All 4^N coefficients; each distinct (receivers, transmitters) pair is matched once.

    For cut A and state s the surviving receivers are the listening relays
    outside A plus the destination, and the surviving transmitters are the
    transmitting relays inside A plus the source. Only 3^N such pairs exist.
    """
    n = B.n_relays
    size = 2 ** n
    if B.exact:
        scale = lcm(*(x.denominator for row in B.beta for x in row))
        w = [[int(x * scale) for x in row] for row in B.beta]
    else:
        scale = 1
        w = [list(row) for row in B.beta]
    masks = _relay_masks(n)
    full = size - 1
    cache: dict[tuple[int, int], object] = {}
    rows_out = []
    for i in range(size):
        cut_bits = i
        row_vals = []
        for j in range(size):
            rx = ~cut_bits & ~j & full
            tx = cut_bits & j
            key = (rx, tx)
            val = cache.get(key)
            if val is None:
                recv = [k for k in range(n) if rx & masks[k]] + [n]
                send = [k for k in range(n) if tx & masks[k]] + [n]
                val = assignment_value([[w[r][c] for c in send] for r in recv])
                cache[key] = val
            row_vals.append(val)
        rows_out.append(row_vals)
    if B.exact:
        return CoefficientMatrix(n, tuple(tuple(row) for row in rows_out), scale, True)
    return CoefficientMatrix(n, tuple(tuple(float(v) for v in row) for row in rows_out), 1, False)


def _finish(a: CoefficientMatrix, lam, d, forced) -> GdofSolution:
    support = [j for j, x in enumerate(lam) if x > (0 if a.exact else FLOAT_EPS)]
    tight = []
    if a.exact:
        # compare sum_j num[i][j] * L_j with d * scale * den in integers
        den = lcm(*(lam[j].denominator for j in support))
        weights = [(j, int(lam[j] * den)) for j in support]
        target = d * a.scale * den
        for i, row in enumerate(a.numerators):
            if sum(row[j] * w for j, w in weights) == target:
                tight.append(i + 1)
    else:
        totals = a.as_array[:, support] @ np.array([lam[j] for j in support])
        tight = [int(i) + 1 for i in np.flatnonzero(np.abs(totals - d) < FLOAT_EPS)]
    return GdofSolution(
        d=d,
        schedule=Schedule(tuple(lam)),
        support_size=len(support),
        tight_cuts=tuple(tight),
        solver_mode="exact" if a.exact else "float",
        forced_zero=frozenset(forced),
    )


def solve_gdof_restricted(a: CoefficientMatrix, forced_zero=()) -> GdofSolution:
    """LP optimum with ``lam_j = 0`` for every 1-based state index in ``forced_zero``."""
    forced = set(forced_zero)
    size = a.size
    if not forced <= set(range(1, size + 1)):
        raise ValueError(f"forced states must lie in [1, {size}]")
    allowed = [j - 1 for j in range(1, size + 1) if j not in forced]
    if not allowed:
        raise ValueError("cannot force every state to zero")
    res = solve_maxmin(a.numerators, allowed=allowed, exact=a.exact,
                       scale=a.scale, float_array=a.as_array)
    return _finish(a, list(res.lam), res.value, forced)


def solve_gdof(a: CoefficientMatrix) -> GdofSolution:
    return solve_gdof_restricted(a, ())


def gdof(B: ExponentMatrix) -> GdofSolution:
    return solve_gdof(build_coefficient_matrix(B))


def minimum_support_solution(a: CoefficientMatrix, start: GdofSolution | None = None) -> GdofSolution:
    """Optimal schedule with a locally minimal set of active states.

    Active states are tried in order of increasing probability; a state is
    forced to zero (together with the ones already forced) whenever the
    optimum survives, and the search restarts from the new solution.
    Stops when no single active state can be removed.
    """
    best = start if start is not None else solve_gdof(a)
    exact = a.exact
    eps = 0 if exact else FLOAT_EPS
    forced = set(best.forced_zero)
    target = best.d
    improved = True
    while improved and best.support_size > 1:
        improved = False
        lam = best.lambdas
        order = sorted(best.schedule.support(eps), key=lambda j: (lam[j - 1], j))
        for j in order:
            trial = solve_gdof_restricted(a, forced | {j})
            same = trial.d == target if exact else abs(trial.d - target) <= FLOAT_EPS
            if same and trial.support_size <= best.support_size:
                forced.add(j)
                best = trial
                improved = True
                break
    return best


def fd_gdof(B: ExponentMatrix):
    """Full-duplex gDoF: min over cuts of the unmasked MWBM value."""
    n = B.n_relays
    return min(
        max_weight_matching(unmasked_submatrix(B, cut_from_index(i, n))).value
        for i in range(1, 2 ** n + 1)
    )


__all__ = [
    "CoefficientMatrix",
    "GdofSolution",
    "MAX_EXACT_RELAYS",
    "Schedule",
    "build_coefficient_matrix",
    "fd_gdof",
    "gdof",
    "minimum_support_solution",
    "solve_gdof",
    "solve_gdof_restricted",
    "state_from_index",
]
