"""Constant-gap formulas and finite-SNR inner/outer rate expressions.

All logarithms are base 2, so every value is in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .network import ChannelInstance, channel_submatrix, cut_from_index, state_from_index
from .oracle import log2det_iplus

E = math.e
STATED_PER_NODE_CONSTANT = 2.021
FD_PER_NODE_CONSTANT = 2 * 0.5105
GAMMA_STATIONARY = (math.sqrt(4 * E + 1) + 1) / 2


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"number of relays must be a positive integer, got {n}")


def gap_hd_network(n: int) -> float:
    _check_n(n)
    return STATED_PER_NODE_CONSTANT * (n + 2)


def gap_hd_network_old(n: int) -> float:
    _check_n(n)
    k = n + 2
    return k / 2 * math.log2(4 * k)


def gap_hd_diamond(n: int) -> float:
    """Gap for the HD diamond network (K = N + 2 > 2 branch of the bound)."""
    _check_n(n)
    k = n + 2
    return 4 / k * math.log2(k / 2 + k ** 3 / 8) + k * math.log2(2 + 8 / k ** 2)


def gap_hd_diamond_approx(n: int) -> float:
    """Large-N approximation: about one bit per relay."""
    _check_n(n)
    return float(n)


def gap_fd_multicast(k: int) -> float:
    if int(k) != k or k < 2:
        raise ValueError(f"number of nodes must be an integer >= 2, got {k}")
    return FD_PER_NODE_CONSTANT * k


@dataclass(frozen=True)
class GapReport:
    n_relays: int
    gap_new_bits: float
    gap_old_bits: float
    gap_diamond_bits: float
    gap_fd_multicast_bits: float


def gap_report(n: int) -> GapReport:
    return GapReport(n, gap_hd_network(n), gap_hd_network_old(n), gap_hd_diamond(n),
                     gap_fd_multicast(n + 2))


def gap_warnings(n_max: int = 30) -> list[str]:
    """Known inconsistencies of the formulas, as human-readable notes."""
    notes = []
    for n in range(1, n_max + 1):
        if gap_hd_network(n) >= gap_hd_network_old(n) and n >= 2:
            notes.append(
                f"N={n}: 2.021(N+2) = {gap_hd_network(n):.3f} is not below the older "
                f"(N+2)/2 log2(4(N+2)) = {gap_hd_network_old(n):.3f}"
            )
    gamma, mu, const = gap_constant_minmax()
    notes.append(
        f"numeric min-max of the per-node bracket is {const:.4f} bits "
        f"(gamma={gamma:.4f}, mu={mu:.3f}), not the stated {STATED_PER_NODE_CONSTANT}"
    )
    return notes


# --- the min over gamma / max over mu behind the per-node constant -----------

def gap_bracket(mu, gamma):
    """Per-node gap bracket as a function of mu = |A|/K and gamma = 1 + sigma^2.

    Vectorized over numpy arrays. The second term vanishes at mu = 0 and
    mu = 1 (its min{mu, 1 - mu} prefactor is zero there).
    """
    mu = np.asarray(mu, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    m = np.minimum(mu, 1 - mu)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(mu > 0, m / np.where(mu > 0, mu, 1.0), 0.0)
        arg = np.where(m > 0, gamma * mu / np.where(m > 0, m, 1.0), E)
    first = mu * np.log2(2 * gamma / (gamma - 1))
    second = m * np.minimum(gamma / E, ratio) * np.log2(np.maximum(E, arg))
    return first + second


def gap_constant_minmax(mu_grid_size: int = 1001, gamma_range=(E - 1, 20.0, 19001)):
    """Numeric min over gamma of max over mu of the bracket.

    ``gamma_range`` is (low, high, points); low must be at least e - 1.
    Returns (gamma_opt, mu_opt, per-node constant in bits).
    """
    lo, hi, pts = gamma_range
    if mu_grid_size < 2 or pts < 1:
        raise ValueError("empty grid")
    if lo < E - 1 - 1e-12:
        raise ValueError("gamma must be at least e - 1")
    gammas = np.linspace(lo, hi, int(pts))
    # gamma = 1 is excluded by lo >= e - 1 > 1
    mus = np.linspace(0.0, 1.0, int(mu_grid_size))
    vals = gap_bracket(mus[None, :], gammas[:, None])
    inner = vals.max(axis=1)
    g = int(np.argmin(inner))
    mu_opt = float(mus[int(np.argmax(vals[g]))])
    return float(gammas[g]), mu_opt, float(inner[g])


def gap_profile_half(gammas):
    """The bracket at mu = 1/2 as a function of gamma."""
    return gap_bracket(0.5, np.asarray(gammas, dtype=float))


# --- finite-SNR rates -------------------------------------------------------

def _cut_terms(H: ChannelInstance, lam, weight: float):
    n = H.n_relays
    size = 2 ** n
    lam = [float(x) for x in lam]
    if len(lam) != size:
        raise ValueError(f"schedule needs {size} entries, got {len(lam)}")
    if min(lam) < 0 or abs(sum(lam) - 1) > 1e-9:
        raise ValueError("schedule must be a probability vector")
    states = [state_from_index(j, n) for j in range(1, size + 1)]
    for i in range(1, size + 1):
        cut = cut_from_index(i, n)
        total = 0.0
        for lj, st in zip(lam, states):
            if lj > 0:
                total += lj * log2det_iplus(channel_submatrix(H, cut, st), weight)
        yield cut, total


def cutset_det_rate(H: ChannelInstance, lam) -> float:
    """min over cuts of sum_s lam_s log2 det(I + H_s H_s^H), identity input covariance."""
    return min(total for _, total in _cut_terms(H, lam, 1.0))


def nnc_rate(H: ChannelInstance, lam, sigma2: float) -> float:
    """Noisy-network-coding lower bound with quantization noise ``sigma2``.

    The source side of every cut holds the source plus the cut relays, so
    the compression penalty counts |cut| + 1 nodes.
    """
    if not sigma2 > 0:
        raise ValueError("sigma2 must be positive")
    penalty = math.log2(1 + 1 / sigma2)
    worst = min(
        total - (len(cut) + 1) * penalty
        for cut, total in _cut_terms(H, lam, 1 / (1 + sigma2))
    )
    return max(worst, 0.0)


def sigma2_grid(points: int = 50, lo: float = E - 2, hi: float = 100.0) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), points)


def best_nnc_rate(H: ChannelInstance, lam, grid=None) -> float:
    grid = sigma2_grid() if grid is None else grid
    return max(nnc_rate(H, lam, float(s2)) for s2 in grid)
