"""Primal simplex for the max-min schedule LP.

Solves ``max d  s.t.  d <= sum_j a[i][j] lam_j  (every row i),  sum lam = 1,
lam >= 0`` with Bland's rule (lowest-index entering variable, lowest-index
leaving variable on ratio ties).

Variable order for Bland's rule: ``lam_0..lam_{K-1}``, ``d``, then the row
slacks ``s_0..s_{M-1}``. Any basis of this LP (once ``d`` is basic) holds a
set S of states, ``d``, and the slacks of the non-tight rows; the nonbasic
slacks mark a set T of tight rows with ``|T| == |S|``. Each pivot therefore
only needs the (|S|+1)-square systems restricted to rows T and columns S,
and the method stays a textbook primal simplex while touching O(|S|*K)
coefficients per iteration.

Exact mode scales the data to integers and runs every step in integer
arithmetic (fraction-free elimination, common denominators). Bland's rule
is hopelessly slow on these very degenerate LPs from a cold start, so the
exact phase starts from a basis recovered from a HiGHS float vertex
whenever that basis is exactly feasible; it then usually only has to
certify optimality. Float mode returns the HiGHS vertex directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from scipy.optimize import linprog


class LPError(RuntimeError):
    """Internal simplex failure (singular basis or iteration limit)."""


@dataclass(frozen=True)
class LPResult:
    value: object
    lam: tuple
    basic_states: tuple[int, ...]
    tight_rows: tuple[int, ...]
    iterations: int


# --- linear algebra on the small basis systems -------------------------------

def _bareiss(mat, rhs_list):
    """Solve an integer system exactly; returns (numerators, denominator) per rhs.

    Fraction-free Gaussian elimination, so every intermediate stays an
    integer. Returns None for a singular matrix. The denominator is positive.
    """
    n = len(mat)
    k = len(rhs_list)
    aug = [list(mat[r]) + [rhs[r] for rhs in rhs_list] for r in range(n)]
    width = n + k
    prev = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        if piv != col:
            aug[col], aug[piv] = aug[piv], aug[col]
        prow = aug[col]
        p = prow[col]
        for r in range(col + 1, n):
            row = aug[r]
            f = row[col]
            for c in range(col + 1, width):
                row[c] = (p * row[c] - f * prow[c]) // prev
            row[col] = 0
        prev = p
    det = aug[n - 1][n - 1]
    out = []
    for s in range(k):
        # back substitution with x = num / det kept integral
        num = [0] * n
        for r in range(n - 1, -1, -1):
            row = aug[r]
            acc = row[n + s] * det
            for c in range(r + 1, n):
                if row[c]:
                    acc -= row[c] * num[c]
            num[r] = acc // row[r]
        if det < 0:
            out.append(([-x for x in num], -det))
        else:
            out.append((num, det))
    return out


def _reduce(num, den):
    g = den
    for x in num:
        g = gcd(g, x)
        if g == 1:
            return num, den
    return [x // g for x in num], den // g


def _scale_exact(a):
    """Integer matrix and scale D with a == A_int / D."""
    fr = [[Fraction(x) for x in row] for row in a]
    scale = lcm(*(x.denominator for row in fr for x in row)) if fr and fr[0] else 1
    return [[int(x * scale) for x in row] for row in fr], scale


# --- float solve (HiGHS) and crossover ----------------------------------------

def _highs(A, allowed):
    """Float optimum over ``allowed`` columns: (lam, d, slack, row duals)."""
    m = A.shape[0]
    sub = A[:, allowed]
    kk = sub.shape[1]
    c = np.zeros(kk + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-sub, np.ones((m, 1))])
    a_eq = np.zeros((1, kk + 1))
    a_eq[0, :kk] = 1.0
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                  bounds=[(0, None)] * kk + [(None, None)], method="highs-ds")
    if res.status != 0:
        raise LPError(f"HiGHS failed: {res.message}")
    lam = np.zeros(A.shape[1])
    lam[allowed] = res.x[:kk]
    d = res.x[kk]
    return lam, d, A @ lam - d, -res.ineqlin.marginals


def _crossover(A, lam, slack, y, tol=1e-7):
    """Square basis (S, T) from a float vertex, or None.

    S is the float support; T is filled with tight rows, highest dual
    first, keeping the bordered (|T|+1)x(|S|+1) system nonsingular.
    """
    S = [int(j) for j in np.flatnonzero(lam > tol)]
    if not S:
        return None
    ns = len(S)
    tight = [int(i) for i in np.flatnonzero(slack < tol)]
    tight.sort(key=lambda i: (-y[i], i))
    basis_rows = [np.append(np.ones(ns), 0.0)]
    T = []
    for i in tight:
        trial = basis_rows + [np.append(A[i, S], -1.0)]
        if np.linalg.matrix_rank(np.array(trial)) == len(trial):
            basis_rows = trial
            T.append(i)
            if len(T) == ns:
                return S, T
    return None


# --- exact simplex (integers) ------------------------------------------------

def _exact_primal(A, S, T):
    """Exact basic solution (lam_S numerators, d numerator, common denominator)."""
    ns = len(S)
    pmat = [[A[i][j] for j in S] + [-1] for i in T] + [[1] * ns + [0]]
    sol = _bareiss(pmat, [[0] * ns + [1]])
    if sol is None:
        return None
    num, den = _reduce(*sol[0])
    return pmat, num[:ns], num[ns], den


def _feasible(A, S, T, lam, d):
    if any(x < 0 for x in lam):
        return False
    t_set = set(T)
    for i, row in enumerate(A):
        if i in t_set:
            continue
        if sum(row[j] * x for j, x in zip(S, lam)) < d:
            return False
    return True


def _exact_simplex(A, allowed, max_iter, start):
    m = len(A)
    k = len(A[0])
    S, T = list(start[0]), list(start[1])
    it = 0
    while True:
        it += 1
        if it > max_iter:
            raise LPError("simplex iteration limit reached")
        ns = len(S)
        prim = _exact_primal(A, S, T)
        if prim is None:
            raise LPError("singular basis")
        pmat, lam_s, d, den = prim
        # dual: columns S: sum_i y_i A[i][j] - v = 0 ; sum y = 1
        dmat = [[A[i][j] for i in T] + [-1] for j in S] + [[1] * ns + [0]]
        dsol = _bareiss(dmat, [[0] * ns + [1]])
        if dsol is None:
            raise LPError("singular dual basis")
        ynum, yden = dsol[0]
        y, v = ynum[:ns], ynum[ns]

        # Bland pricing over states: lowest index with positive profit
        entering = None
        in_s = set(S)
        rows_t = [A[i] for i in T]
        for j in allowed:
            if j in in_s:
                continue
            profit = -v
            for yi, row in zip(y, rows_t):
                profit += yi * row[j]
            if profit > 0:
                entering = ("lam", j)
                break
        if entering is None:
            for pos in sorted(range(ns), key=lambda p: T[p]):
                if y[pos] < 0:
                    entering = ("slack", T[pos])
                    break
        if entering is None:
            return S, T, lam_s, d, den, it

        kind, q = entering
        if kind == "lam":
            rhs = [-A[i][q] for i in T] + [-1]
        else:
            rhs = [1 if i == q else 0 for i in T] + [0]
        dsol = _bareiss(pmat, [rhs])
        if dsol is None:
            raise LPError("singular basis in ratio test")
        dnum, dden = dsol[0]
        dlam, dd = dnum[:ns], dnum[ns]

        # ratios compared as fractions (value num / direction num), both
        # sharing their own denominators, so compare value*dden / (-dir*den)
        best = None  # (Fraction ratio, var_index, kind, id)
        for pos, j in enumerate(S):
            if dlam[pos] < 0:
                cand = (Fraction(lam_s[pos] * dden, -dlam[pos] * den), j, "lam", j)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        t_set = set(T)
        for i in range(m):
            if i in t_set:
                continue
            row = A[i]
            ds = -dd
            for pos, j in enumerate(S):
                ds += row[j] * dlam[pos]
            if kind == "lam":
                ds += row[q] * dden
            if ds < 0:
                s_val = -d
                for pos, j in enumerate(S):
                    s_val += row[j] * lam_s[pos]
                cand = (Fraction(s_val * dden, -ds * den), k + 1 + i, "slack", i)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:
            raise LPError("unbounded direction; coefficient matrix malformed")
        _, _, lkind, lid = best
        if kind == "lam":
            S.append(q)
        else:
            T.remove(q)
        if lkind == "lam":
            S.remove(lid)
        else:
            T.append(lid)


def _cold_start(A, allowed):
    m = len(A)
    j0 = max(allowed, key=lambda j: (min(A[i][j] for i in range(m)), -j))
    i0 = min(range(m), key=lambda i: (A[i][j0], i))
    return [j0], [i0]


def solve_maxmin(a, allowed=None, exact: bool = True, tol: float = 1e-9,
                 max_iter: int = 100_000, warm_start: bool = True,
                 scale: int | None = None, float_array=None) -> LPResult:
    """Optimal vertex of the max-min LP over the states in ``allowed``.

    ``a`` is an M x K nonnegative matrix (rows = constraints, columns =
    states). States outside ``allowed`` are held at zero. In exact mode the
    float solve only proposes a starting basis; feasibility and optimality
    are decided in integer arithmetic by the Bland simplex.

    When ``scale`` is given, ``a`` must already be an integer matrix that
    represents ``a / scale``. ``float_array`` may supply a cached float
    copy of ``a`` (in units of ``a / scale``).
    """
    m = len(a)
    if m == 0:
        raise ValueError("empty coefficient matrix")
    k = len(a[0])
    allowed = list(range(k)) if allowed is None else sorted(set(allowed))
    if not allowed:
        raise ValueError("at least one state must be allowed")

    if not exact:
        A = float_array if float_array is not None else np.array([[float(x) for x in row] for row in a])
        lam, d, slack, _ = _highs(A, allowed)
        lam = np.where(lam > tol, lam, 0.0)
        basic = tuple(int(j) for j in np.flatnonzero(lam))
        tight = tuple(int(i) for i in np.flatnonzero(np.abs(slack) < tol))
        return LPResult(float(d), tuple(float(x) for x in lam), basic, tight, 0)

    if scale is None:
        A, scale = _scale_exact(a)
        float_array = None
    else:
        A = a
    start = None
    if warm_start:
        Af = np.array(A, dtype=float) if float_array is None else float_array * scale
        try:
            lam, d, slack, y = _highs(Af, allowed)
            cand = _crossover(Af, lam, slack, y)
        except (LPError, np.linalg.LinAlgError):
            cand = None
        if cand is not None:
            prim = _exact_primal(A, *cand)
            if prim is not None and _feasible(A, cand[0], cand[1], prim[1], prim[2]):
                start = cand
    if start is None:
        start = _cold_start(A, allowed)
    S, T, lam_s, d, den, it = _exact_simplex(A, allowed, max_iter, start)

    lam_full = [Fraction(0)] * k
    for pos, j in enumerate(S):
        lam_full[j] = Fraction(lam_s[pos], den)
    value = Fraction(d, den * scale)
    order = sorted(range(len(S)), key=lambda p: S[p])
    return LPResult(
        value=value,
        lam=tuple(lam_full),
        basic_states=tuple(S[p] for p in order),
        tight_rows=tuple(sorted(T)),
        iterations=it,
    )
