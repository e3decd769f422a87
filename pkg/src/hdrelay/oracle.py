"""Independent references: exhaustive matching, finite-SNR log-dets, grid LP.

Nothing here shares code with the Hungarian solver or the simplex, so these
can be used to check them.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import lcm

import numpy as np
from scipy.optimize import linprog

from .network import (
    ABSENT,
    ChannelInstance,
    ExponentMatrix,
    MaskedWeightMatrix,
    channel_submatrix,
    cut_from_index,
    masked_submatrix,
    realize_channel,
    state_from_index,
)

BRUTE_FORCE_LIMIT = 8


def brute_force_mwbm(w: MaskedWeightMatrix):
    """Best sum over every k-subset of columns and every ordering of them onto the rows.

    k = min(rows, cols). ABSENT cells contribute nothing, which covers all
    partial matchings because weights are nonnegative. Rational weights
    are summed as integers over their common denominator.
    """
    n_rows, n_cols = w.shape
    if n_rows == 0 or n_cols == 0:
        return 0
    weights = [[0 if x is ABSENT else x for x in r] for r in w.weights]
    if n_rows > n_cols:
        weights = [list(c) for c in zip(*weights)]
        n_rows, n_cols = n_cols, n_rows
    if n_rows > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to min(rows, cols) <= {BRUTE_FORCE_LIMIT}")
    scale = 1
    if all(isinstance(x, (int, Fraction)) for r in weights for x in r):
        scale = lcm(*(Fraction(x).denominator for r in weights for x in r))
        weights = [[int(x * scale) for x in r] for r in weights]
    best = 0
    rows = range(n_rows)
    for cols in combinations(range(n_cols), n_rows):
        for perm in permutations(cols):
            total = sum(weights[r][c] for r, c in zip(rows, perm))
            if total > best:
                best = total
    return Fraction(best, scale) if scale != 1 else best


def log2det_iplus(h: np.ndarray, weight: float = 1.0) -> float:
    """log2 det(I + weight * h h^H) without forming the Gram matrix.

    Uses det([[I, s h], [-s h^H, I]]) = det(I + s^2 h h^H), factored by LU
    with partial pivoting, so the dynamic range of h is not squared.
    """
    h = np.asarray(h, dtype=complex)
    if h.size == 0:
        return 0.0
    k, n = h.shape
    s = np.sqrt(weight)
    m = np.zeros((k + n, k + n), dtype=complex)
    m[:k, :k] = np.eye(k)
    m[k:, k:] = np.eye(n)
    m[:k, k:] = s * h
    m[k:, :k] = -s * h.conj().T
    sign, logabs = np.linalg.slogdet(m)
    if sign == 0:
        raise FloatingPointError("augmented matrix numerically singular")
    return float(logabs / np.log(2.0))


def logdet_cut_value(H: ChannelInstance, cut, state) -> float:
    """log2 det(I + H H^H) of the masked channel across ``cut`` in ``state``."""
    return log2det_iplus(channel_submatrix(H, cut, state))


def max_min_value(a: np.ndarray) -> float:
    """Float value of max_lam min_i (a lam)_i over the simplex (HiGHS)."""
    m, k = a.shape
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-a, np.ones((m, 1))])
    a_eq = np.append(np.ones(k), 0.0)[None, :]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * k + [(None, None)], method="highs")
    if res.status != 0:
        raise RuntimeError(res.message)
    return float(-res.fun)


def numeric_coefficients(B: ExponentMatrix, snr: float, phase_trials: int = 11,
                         seed: int = 0) -> np.ndarray:
    """Median over phase draws of logdet / log2(1 + snr), per cut and state."""
    n = B.n_relays
    size = 2 ** n
    cuts = [cut_from_index(i, n) for i in range(1, size + 1)]
    states = [state_from_index(j, n) for j in range(1, size + 1)]
    norm = np.log2(1.0 + snr)
    vals = np.empty((phase_trials, size, size))
    for t in range(phase_trials):
        H = realize_channel(B, snr, seed + t)
        for i, cut in enumerate(cuts):
            for j, st in enumerate(states):
                vals[t, i, j] = logdet_cut_value(H, cut, st) / norm
    return np.median(vals, axis=0)


def gdof_numeric(B: ExponentMatrix, snr_list=(1e4, 1e6, 1e8, 1e10, 1e12),
                 phase_trials: int = 11, seed: int = 0) -> list[float]:
    """LP optimum with finite-SNR coefficients, one entry per SNR (last = estimate)."""
    if B.n_relays > 4:
        raise ValueError("gdof_numeric is limited to N <= 4")
    return [max_min_value(numeric_coefficients(B, snr, phase_trials, seed)) for snr in snr_list]


def grid_search_gdof_n2(B: ExponentMatrix, grid_step: float = 1e-3) -> float:
    """max over a grid on the 4-state simplex of the worst of the four cut values.

    Coefficients come straight from brute_force_mwbm, so neither the
    Hungarian solver nor the simplex is involved.
    """
    if B.n_relays != 2:
        raise ValueError("grid search is for two-relay networks")
    steps = int(round(1.0 / grid_step))
    if steps < 1 or abs(steps * grid_step - 1.0) > 1e-9:
        raise ValueError("grid_step must divide 1")
    a = np.array([
        [float(brute_force_mwbm(masked_submatrix(B, cut_from_index(i, 2), state_from_index(j, 2))))
         for j in range(1, 5)]
        for i in range(1, 5)
    ])
    best = -np.inf
    # lam = (i, j, k, steps - i - j - k) / steps, one triangular slice per i
    for i in range(steps + 1):
        idx = np.arange(steps - i + 1)
        jj, kk = np.meshgrid(idx, idx, indexing="ij")
        rest = steps - i - jj - kk
        lam = np.stack([np.full(jj.shape, i), jj, kk, rest]).astype(float) / steps
        vals = np.tensordot(a, lam, axes=(1, 0)).min(axis=0)
        best = max(best, float(vals[rest >= 0].max()))
    return best


def random_gains(beta, snr: float, seed: int) -> np.ndarray:
    """Complex k x n matrix with |h|^2 = snr**beta and i.i.d. uniform phases.

    ``beta`` may contain ABSENT (realized as an exact zero gain).
    """
    rows = [list(r) for r in beta]
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2 * np.pi, size=(len(rows), len(rows[0]) if rows else 0))
    mag = np.array([[0.0 if x is ABSENT else float(snr) ** (float(x) / 2) for x in r] for r in rows])
    return mag * np.exp(1j * phases)
