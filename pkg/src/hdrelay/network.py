"""Channel description for Gaussian half-duplex relay networks.

Node convention: relays are 1..N, and index N+1 plays two roles. As a
column (transmitter) it is the source, as a row (receiver) it is the
destination. ``beta[i][j]`` (1-based) is the SNR exponent of the link from
transmitter j to receiver i, so that ``|h_ij|^2 = SNR ** beta_ij``.

State and cut indices are 1-based and follow the binary convention
``index - 1 = sum_k bit_k * 2**(N-k)`` (relay 1 is the most significant bit).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


class _Absent:
    """Sentinel for a suppressed link (distinct from a unit-gain exponent 0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABSENT"

    def __reduce__(self):
        return (_Absent, ())


ABSENT = _Absent()


def to_exact(x) -> Fraction:
    """Convert a user-supplied exponent to an exact rational.

    Strings may be ``"p/q"`` or decimals; floats go through their shortest
    repr so ``0.1`` becomes ``1/10`` rather than the binary expansion.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not an exponent")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not np.isfinite(x):
            raise ValueError(f"non-finite exponent {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, np.integer):
        return Fraction(int(x))
    if isinstance(x, np.floating):
        return to_exact(float(x))
    raise TypeError(f"cannot interpret {x!r} as an exponent")


def _to_float(x) -> float:
    if isinstance(x, str):
        return float(Fraction(x.strip()))
    return float(x)


# --- index conventions -----------------------------------------------------

def _check_index(index: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"number of relays must be positive, got {n}")
    if not 1 <= index <= 2 ** n:
        raise ValueError(f"index {index} outside [1, {2 ** n}] for N={n}")


def state_from_index(j: int, n: int) -> tuple[int, ...]:
    """Relay states for state index ``j``; bit k = 1 means relay k transmits."""
    _check_index(j, n)
    return tuple((j - 1) >> (n - k) & 1 for k in range(1, n + 1))


def index_from_state(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"state bits must be 0/1, got {bits!r}")
        value = 2 * value + b
    return value + 1


def cut_from_index(i: int, n: int) -> frozenset[int]:
    """Relays on the source side of cut ``i``."""
    bits = state_from_index(i, n)
    return frozenset(k for k, b in enumerate(bits, start=1) if b)


def index_from_cut(members: Iterable[int], n: int) -> int:
    members = set(members)
    if not members <= set(range(1, n + 1)):
        raise ValueError(f"cut members {sorted(members)} not within relays 1..{n}")
    return index_from_state([1 if k in members else 0 for k in range(1, n + 1)])


# --- exponent matrix -------------------------------------------------------

@dataclass(frozen=True)
class ExponentMatrix:
    """(N+1)x(N+1) SNR-exponent matrix.

    Entries are all ``Fraction`` (exact mode) or all ``float`` (fast mode).
    Relay self-loop entries are kept as given but ignored everywhere.
    """

    n_relays: int
    beta: tuple[tuple, ...]
    exact: bool = True

    def __post_init__(self):
        n = self.n_relays
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"n_relays must be a positive integer, got {n!r}")
        if len(self.beta) != n + 1 or any(len(row) != n + 1 for row in self.beta):
            raise ValueError(f"beta must be {n + 1}x{n + 1}")
        conv = to_exact if self.exact else _to_float
        rows = tuple(tuple(conv(x) for x in row) for row in self.beta)
        for row in rows:
            for x in row:
                if x < 0 or (not self.exact and not np.isfinite(x)):
                    raise ValueError(f"exponents must be finite and nonnegative, got {x}")
        object.__setattr__(self, "beta", rows)

    @classmethod
    def from_rows(cls, rows, exact: bool = True) -> "ExponentMatrix":
        rows = [list(r) for r in rows]
        return cls(len(rows) - 1, tuple(tuple(r) for r in rows), exact)

    @property
    def size(self) -> int:
        return self.n_relays + 1

    def __getitem__(self, ij):
        """1-based access ``B[i, j]``."""
        i, j = ij
        return self.beta[i - 1][j - 1]

    @property
    def direct(self):
        """Exponent of the source-destination link."""
        return self.beta[self.n_relays][self.n_relays]

    def to_exact(self) -> "ExponentMatrix":
        return self if self.exact else ExponentMatrix(self.n_relays, self.beta, True)

    def to_float(self) -> "ExponentMatrix":
        return self if not self.exact else ExponentMatrix(self.n_relays, self.beta, False)

    def with_mode(self, mode: str) -> "ExponentMatrix":
        if mode == "exact":
            return self.to_exact()
        if mode == "float":
            return self.to_float()
        raise ValueError(f"unknown mode {mode!r}")

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.beta])

    # -- serialization --

    def to_dict(self) -> dict:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else x.numerator
            return x
        return {"n_relays": self.n_relays, "beta": [[enc(x) for x in row] for row in self.beta]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict, exact: bool = True) -> "ExponentMatrix":
        try:
            n = data["n_relays"]
            beta = data["beta"]
        except (KeyError, TypeError) as exc:
            raise ValueError("network JSON needs 'n_relays' and 'beta'") from exc
        if not isinstance(beta, list) or not all(isinstance(r, list) for r in beta):
            raise ValueError("'beta' must be a list of rows")
        return cls(n, tuple(tuple(r) for r in beta), exact)

    @classmethod
    def from_json(cls, text: str, exact: bool = True) -> "ExponentMatrix":
        return cls.from_dict(json.loads(text), exact)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self.to_dict()["beta"]:
            writer.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, exact: bool = True) -> "ExponentMatrix":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        return cls.from_rows(rows, exact)


# --- masked submatrices ----------------------------------------------------

@dataclass(frozen=True)
class MaskedWeightMatrix:
    """Rectangular weights with ``ABSENT`` entries; labels are node indices."""

    weights: tuple[tuple, ...]
    row_labels: tuple[int, ...] = field(default=())
    col_labels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.weights)
        ncols = len(rows[0]) if rows else len(self.col_labels)
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged weight matrix")
        object.__setattr__(self, "weights", rows)
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(range(1, len(rows) + 1)))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(range(1, ncols + 1)))
        if len(self.row_labels) != len(rows) or len(self.col_labels) != ncols:
            raise ValueError("label lengths do not match the weight matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def present(self, r: int, c: int) -> bool:
        return self.weights[r][c] is not ABSENT

    def column_absent(self, c: int) -> bool:
        return all(row[c] is ABSENT for row in self.weights)

    def row_absent(self, r: int) -> bool:
        return all(x is ABSENT for x in self.weights[r])


def _check_sizes(n: int, cut: frozenset, state: Sequence[int]) -> None:
    if len(state) != n:
        raise ValueError(f"state has {len(state)} bits, network has {n} relays")
    if not set(cut) <= set(range(1, n + 1)):
        raise ValueError(f"cut {sorted(cut)} not within relays 1..{n}")


def submatrix_labels(n: int, cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Receivers ``cut^c + {N+1}`` and transmitters ``cut + {N+1}``, ascending."""
    cut = frozenset(cut)
    rows = tuple(k for k in range(1, n + 1) if k not in cut) + (n + 1,)
    cols = tuple(sorted(cut)) + (n + 1,)
    return rows, cols


def masked_submatrix(B: ExponentMatrix, cut, state: Sequence[int]) -> MaskedWeightMatrix:
    """Exponents seen across ``cut`` when the relays are in ``state``.

    A transmitting relay cannot receive (its row is ABSENT), a listening
    relay cannot transmit (its column is ABSENT). Source column and
    destination row are never masked.
    """
    n = B.n_relays
    cut = frozenset(cut)
    _check_sizes(n, cut, state)
    rows, cols = submatrix_labels(n, cut)
    weights = []
    for r in rows:
        row = []
        for c in cols:
            if (r <= n and state[r - 1] == 1) or (c <= n and state[c - 1] == 0) or (r == c and r <= n):
                row.append(ABSENT)
            else:
                row.append(B.beta[r - 1][c - 1])
        weights.append(tuple(row))
    return MaskedWeightMatrix(tuple(weights), rows, cols)


def unmasked_submatrix(B: ExponentMatrix, cut) -> MaskedWeightMatrix:
    """Full-duplex counterpart: only relay self-loops are ABSENT."""
    n = B.n_relays
    rows, cols = submatrix_labels(n, cut)
    weights = tuple(
        tuple(ABSENT if (r == c and r <= n) else B.beta[r - 1][c - 1] for c in cols)
        for r in rows
    )
    return MaskedWeightMatrix(weights, rows, cols)


# --- finite-SNR realization ------------------------------------------------

@dataclass(frozen=True)
class ChannelInstance:
    """Complex gains with ``|h_ij|^2 = snr ** beta_ij`` and i.i.d. uniform phases."""

    gains: np.ndarray
    snr: float
    seed: int

    @property
    def n_relays(self) -> int:
        return self.gains.shape[0] - 1


def realize_channel(B: ExponentMatrix, snr: float, seed: int) -> ChannelInstance:
    if not snr > 1:
        raise ValueError(f"snr must exceed 1, got {snr}")
    rng = np.random.default_rng(seed)
    size = B.size
    phases = rng.uniform(0.0, 2 * np.pi, size=(size, size))
    beta = B.as_array()
    gains = np.power(float(snr), beta / 2.0) * np.exp(1j * phases)
    for k in range(B.n_relays):
        gains[k, k] = 0.0
    gains.setflags(write=False)
    return ChannelInstance(gains, float(snr), seed)


def channel_submatrix(H: ChannelInstance, cut, state: Sequence[int] | None) -> np.ndarray:
    """Realized gains across ``cut``; masked links are exactly 0.

    ``state=None`` gives the full-duplex (unmasked) submatrix.
    """
    n = H.n_relays
    cut = frozenset(cut)
    if state is not None:
        _check_sizes(n, cut, state)
    rows, cols = submatrix_labels(n, cut)
    sub = H.gains[np.ix_([r - 1 for r in rows], [c - 1 for c in cols])].copy()
    if state is not None:
        for a, r in enumerate(rows):
            if r <= n and state[r - 1] == 1:
                sub[a, :] = 0.0
        for b, c in enumerate(cols):
            if c <= n and state[c - 1] == 0:
                sub[:, b] = 0.0
    return sub
