"""Closed forms for the fully connected two-relay network.

Exponents are named after the links they describe:

    beta = [[ *,    b_1,  a_s1],
            [ b_2,  *,    a_s2],
            [ a_1d, a_2d, 1   ]]

so ``b_i`` is the link into relay i from the other relay and the direct
link is normalized to 1. States are ordered 00, 01, 10, 11 (bit 1 is
relay 1), which matches the general index convention.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

from .lp import solve_maxmin
from .network import ExponentMatrix


def _pos(x):
    return x if x > 0 else 0 * x


def _ratio(num, den):
    # 0/0 = 0: a hop no better than the direct link adds nothing
    if den == 0:
        return 0 * num
    if isinstance(num, int) and isinstance(den, int):
        return Fraction(num, den)
    return num / den


@dataclass(frozen=True)
class TwoRelayParams:
    a_s1: object
    a_s2: object
    a_1d: object
    a_2d: object
    b_1: object = 0
    b_2: object = 0

    def __post_init__(self):
        for name in ("a_s1", "a_s2", "a_1d", "a_2d", "b_1", "b_2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")

    @classmethod
    def symmetric(cls, x, y, z=0) -> "TwoRelayParams":
        """Network with a_s1 = a_2d = x, a_s2 = a_1d = y and b_1 = b_2 = z."""
        return cls(x, y, y, x, z, z)

    @classmethod
    def from_matrix(cls, B: ExponentMatrix) -> "TwoRelayParams":
        if B.n_relays != 2:
            raise ValueError("need a two-relay network")
        if B.direct != 1:
            raise ValueError("closed forms assume a direct-link exponent of 1")
        return cls(B[1, 3], B[2, 3], B[3, 1], B[3, 2], B[1, 2], B[2, 1])

    def to_matrix(self, exact: bool = True) -> ExponentMatrix:
        rows = [[0, self.b_1, self.a_s1],
                [self.b_2, 0, self.a_s2],
                [self.a_1d, self.a_2d, 1]]
        return ExponentMatrix.from_rows(rows, exact=exact)

    def swap_relays(self) -> "TwoRelayParams":
        return TwoRelayParams(self.a_s2, self.a_s1, self.a_2d, self.a_1d, self.b_2, self.b_1)

    def swap_ends(self) -> "TwoRelayParams":
        """Exchange the source and destination roles (a_s1<->a_2d, a_s2<->a_1d)."""
        return replace(self, a_s1=self.a_2d, a_2d=self.a_s1, a_s2=self.a_1d, a_1d=self.a_s2)


# --- full duplex ----------------------------------------------------------

def fd_gdof_n2(p: TwoRelayParams):
    return min(
        max(1, p.a_s1, p.a_s2),
        max(p.a_s2 + p.a_1d, p.b_2 + 1),
        max(p.a_s1 + p.a_2d, p.b_1 + 1),
        max(1, p.a_1d, p.a_2d),
    )


def fd_best_relay_n2(p: TwoRelayParams):
    return max(1, min(p.a_s1, p.a_1d), min(p.a_s2, p.a_2d))


# --- half duplex ----------------------------------------------------------

def hd_best_relay_n2(p: TwoRelayParams):
    def one(a_s, a_d):
        u, v = _pos(a_s - 1), _pos(a_d - 1)
        return _ratio(u * v, u + v)
    return 1 + max(one(p.a_s1, p.a_1d), one(p.a_s2, p.a_2d))


def d_coefficients_n2(p: TwoRelayParams):
    """4x4 cut/state coefficients written out by hand (rows: cuts, cols: states)."""
    one = 1 + 0 * p.a_s1
    d10 = max(1, p.a_s1, p.a_s2)
    d11 = max(1, p.a_s1)
    d12 = max(1, p.a_s2)
    d21 = max(p.a_s1 + p.a_2d, p.b_1 + 1)
    d23 = max(1, p.a_2d)
    d32 = max(p.a_s2 + p.a_1d, p.b_2 + 1)
    d33 = max(1, p.a_1d)
    d43 = max(1, p.a_1d, p.a_2d)
    return [
        [d10, d11, d12, one],
        [d11, d21, one, d23],
        [d12, one, d32, d33],
        [one, d23, d33, d43],
    ]


def hd_gdof_n2(p: TwoRelayParams, exact: bool = True):
    """HD gDoF from the hand-written coefficients (independent of the matcher)."""
    return solve_maxmin(d_coefficients_n2(p), exact=exact).value


def hd_gdof_symmetric_example(x, y, z=0):
    """HD gDoF of the symmetric network ``TwoRelayParams.symmetric(x, y, z)``.

    Only states 01 and 10 are needed; the optimum of the resulting
    one-parameter problem has the two-term closed form below.
    """
    if y > x:
        x, y = y, x
    xp, yp = _pos(x - 1), _pos(y - 1)
    big = max(2 * x - 1, z)
    small = max(2 * y - 1, z)
    first = _ratio(xp * small, xp + small - yp)
    second = _ratio(big * small, big + small)
    return 1 + min(first, second)


# --- regimes --------------------------------------------------------------

class FdCase(str, Enum):
    CASE1 = "CASE1"
    CASE2A = "CASE2A"
    CASE2B = "CASE2B"
    CASE2C = "CASE2C"


@dataclass(frozen=True)
class FdRegime:
    label: FdCase
    best_relay_suboptimal: bool
    exception_set_O: bool
    swapped: bool = False


def in_exception_set(p: TwoRelayParams) -> bool:
    """Parameters where the relay-1 -> relay-2 route brings nothing over the best relay."""
    return (
        (p.b_2 == 0 and p.a_s2 + p.a_1d <= 1)
        or (p.a_1d == 0 and p.b_2 + 1 <= p.a_s2)
        or (p.a_s2 == 0 and p.b_2 + 1 <= p.a_1d)
    )


def classify_fd_regime(p: TwoRelayParams) -> FdRegime:
    """FD regime after relabeling the relays so that a_s2 < a_s1 and a_1d < a_2d.

    CASE1 covers weak dominance of one relay on both hops, which makes the
    labels exhaustive when exponents tie.
    """
    if (p.a_s1 >= p.a_s2 and p.a_1d >= p.a_2d) or (p.a_s2 >= p.a_s1 and p.a_2d >= p.a_1d):
        return FdRegime(FdCase.CASE1, False, False)
    swapped = p.a_s1 < p.a_s2
    q = p.swap_relays() if swapped else p
    exc = in_exception_set(q)
    if max(q.a_s2, q.a_1d) < min(q.a_s1, q.a_2d):
        gain = max(1, q.a_s2, q.a_1d) < min(q.a_s1, q.a_2d) and not exc
        return FdRegime(FdCase.CASE2A, gain, exc, swapped)
    if q.a_2d <= q.a_s2:
        return FdRegime(FdCase.CASE2B, False, exc, swapped)
    return FdRegime(FdCase.CASE2C, False, exc, swapped)


class ZeroState(str, Enum):
    ZERO_00 = "ZERO_00"
    ZERO_11 = "ZERO_11"
    EITHER = "EITHER"


def zeroable_state_n2(p: TwoRelayParams) -> ZeroState:
    """Which of the all-listen / all-transmit states an optimal schedule can drop.

    A source hop no better than the direct link settles it first (all-listen
    is useless), then a weak relay-destination hop (all-transmit is useless);
    otherwise the products of the excess exponents decide, EITHER on a tie.
    """
    s1, s2 = p.a_s1 - 1, p.a_s2 - 1
    d1, d2 = p.a_1d - 1, p.a_2d - 1
    if min(s1, s2) <= 0:
        return ZeroState.ZERO_00
    if min(d1, d2) <= 0:
        return ZeroState.ZERO_11
    if s1 * s2 == d1 * d2:
        return ZeroState.EITHER
    return ZeroState.ZERO_00 if s1 * s2 > d1 * d2 else ZeroState.ZERO_11


def zero_state_indices(z: ZeroState) -> tuple[int, ...]:
    """1-based state indices named by ``z`` (EITHER names both, tried separately)."""
    return {ZeroState.ZERO_00: (1,), ZeroState.ZERO_11: (4,), ZeroState.EITHER: (1, 4)}[z]
