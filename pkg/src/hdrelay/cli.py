"""Command-line front end and experiment drivers."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds
from .closedform2 import TwoRelayParams, classify_fd_regime, zeroable_state_n2
from .gdof import (
    MAX_EXACT_RELAYS,
    build_coefficient_matrix,
    fd_gdof,
    minimum_support_solution,
    solve_gdof,
)
from .mwbm import max_weight_matching
from .network import ABSENT, ExponentMatrix, MaskedWeightMatrix, realize_channel
from .oracle import gdof_numeric, log2det_iplus, random_gains

SWEEP_MAX_RELAYS = 8
SNR_LIST = (1e4, 1e6, 1e8, 1e10, 1e12)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


# --- conjecture sweep ------------------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    n_relays: int
    trials: int = 1000
    seed: int = 0
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(3)
    q: int = 10
    mode: str = "exact"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.lo > self.hi:
            raise ValueError("lo must not exceed hi")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.n_relays <= SWEEP_MAX_RELAYS:
            raise ValueError(f"sweeps support 1 <= N <= {SWEEP_MAX_RELAYS}")


@dataclass(frozen=True)
class TrialResult:
    trial: int
    gdof: object
    support_size: int
    tight_count: int


@dataclass(frozen=True)
class SweepReport:
    n_relays: int
    rows: tuple[TrialResult, ...]

    @property
    def min_support(self) -> int:
        return min(r.support_size for r in self.rows)

    @property
    def max_support(self) -> int:
        return max(r.support_size for r in self.rows)

    @property
    def mean_support(self) -> float:
        return sum(r.support_size for r in self.rows) / len(self.rows)

    @property
    def counterexamples(self) -> tuple[int, ...]:
        return tuple(r.trial for r in self.rows if r.support_size > self.n_relays + 1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "gdof", "support_size", "tight_count", "counterexample"])
        for r in self.rows:
            w.writerow([r.trial, _fmt(r.gdof), r.support_size, r.tight_count,
                        int(r.support_size > self.n_relays + 1)])
        w.writerow(["summary", f"min={self.min_support}", f"max={self.max_support}",
                    f"mean={self.mean_support:.6f}", f"counterexamples={len(self.counterexamples)}"])
        return buf.getvalue()


def random_network(cfg: SweepConfig, trial: int) -> ExponentMatrix:
    """Exponents drawn uniformly from the multiples of 1/q in [lo, hi]."""
    rng = np.random.default_rng([cfg.seed, trial])
    k_lo = int(np.ceil(cfg.lo * cfg.q))
    k_hi = int(np.floor(cfg.hi * cfg.q))
    size = cfg.n_relays + 1
    ks = rng.integers(k_lo, k_hi + 1, size=(size, size))
    rows = [[Fraction(int(k), cfg.q) for k in row] for row in ks]
    for i in range(cfg.n_relays):
        rows[i][i] = Fraction(0)
    return ExponentMatrix.from_rows(rows, exact=cfg.mode == "exact")


def _run_trial(args) -> TrialResult:
    cfg, trial = args
    a = build_coefficient_matrix(random_network(cfg, trial))
    sol = minimum_support_solution(a)
    return TrialResult(trial, sol.d, sol.support_size, sol.tight_count)


def run_conjecture_sweep(cfg: SweepConfig, workers: int = 1) -> SweepReport:
    jobs = [(cfg, t) for t in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_run_trial(j) for j in jobs]
    return SweepReport(cfg.n_relays, tuple(rows))


# --- gap curves -------------------------------------------------------------

def run_gap_curves(n_max: int = 30) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "gap_new", "gap_old", "gap_diamond", "gap_fd_multicast"])
    for n in range(1, n_max + 1):
        r = bounds.gap_report(n)
        w.writerow([n, f"{r.gap_new_bits:.4f}", f"{r.gap_old_bits:.4f}",
                    f"{r.gap_diamond_bits:.4f}", f"{r.gap_fd_multicast_bits:.4f}"])
    return buf.getvalue()


# --- oracle checks ----------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceTrial:
    trial: int
    shape: tuple[int, int]
    mwbm: float
    errors: tuple[float, ...]

    @property
    def decreasing(self) -> bool:
        # non-increasing; 1e-12 absorbs rounding once the error has vanished
        return all(b <= a + 1e-12 for a, b in zip(self.errors, self.errors[1:]))

    @property
    def ok(self) -> bool:
        return self.errors[-1] < 0.05 and self.decreasing


def convergence_trial(seed: int, trial: int, max_size: int = 4, hi: float = 3.0,
                      snr_list=SNR_LIST) -> ConvergenceTrial:
    """|log2det(I+HH^H)/log2(1+SNR) - MWBM| along ``snr_list`` for one random matrix."""
    rng = np.random.default_rng([seed, trial])
    r, c = (int(x) for x in rng.integers(1, max_size + 1, size=2))
    beta = rng.uniform(0.0, hi, size=(r, c))
    value = float(max_weight_matching(MaskedWeightMatrix(tuple(map(tuple, beta.tolist())))).value)
    phase_seed = int(rng.integers(2 ** 32))
    errs = []
    for snr in snr_list:
        h = random_gains(beta.tolist(), snr, phase_seed)
        errs.append(abs(log2det_iplus(h) / np.log2(1 + snr) - value))
    return ConvergenceTrial(trial, (r, c), value, tuple(errs))


def run_convergence(trials: int = 100, seed: int = 0) -> list[ConvergenceTrial]:
    return [convergence_trial(seed, t) for t in range(trials)]


@dataclass(frozen=True)
class SandwichTrial:
    trial: int
    n_relays: int
    snr: float
    sigma2: float
    nnc: float
    cutset: float
    best_nnc: float

    @property
    def gap(self) -> float:
        return self.cutset - self.best_nnc

    @property
    def ok(self) -> bool:
        allowance = bounds.gap_hd_network(self.n_relays) + self.n_relays
        return 0 <= self.nnc <= self.cutset and self.gap <= allowance


def sandwich_trial(seed: int, trial: int, max_relays: int = 3) -> SandwichTrial:
    rng = np.random.default_rng([seed, trial])
    n = int(rng.integers(1, max_relays + 1))
    snr = float(rng.choice([1e2, 1e4, 1e6]))
    beta = rng.uniform(0.0, 3.0, size=(n + 1, n + 1))
    np.fill_diagonal(beta[:n, :n], 0.0)
    B = ExponentMatrix.from_rows(beta.tolist(), exact=False)
    H = realize_channel(B, snr, int(rng.integers(2 ** 32)))
    lam = rng.dirichlet(np.ones(2 ** n))
    sigma2 = float(rng.uniform(np.e - 2, 10.0))
    return SandwichTrial(trial, n, snr, sigma2, bounds.nnc_rate(H, lam, sigma2),
                         bounds.cutset_det_rate(H, lam), bounds.best_nnc_rate(H, lam))


# --- command handlers ---------------------------------------------------------

def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_network(path: str, mode: str) -> ExponentMatrix:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    exact = mode == "exact"
    if path.endswith(".csv"):
        return ExponentMatrix.from_csv(text, exact)
    return ExponentMatrix.from_json(text, exact)


def _check_size(B: ExponentMatrix, mode: str) -> None:
    if mode == "exact" and B.n_relays > MAX_EXACT_RELAYS:
        raise ValueError(
            f"N={B.n_relays} gives a {2 ** B.n_relays}x{2 ** B.n_relays} LP; exact mode is "
            f"limited to N <= {MAX_EXACT_RELAYS}. Use --mode float or a smaller network."
        )


def cmd_gdof(args) -> int:
    B = _load_network(args.network, args.mode)
    _check_size(B, args.mode)
    a = build_coefficient_matrix(B)
    sol = minimum_support_solution(a) if args.min_support else solve_gdof(a)
    _emit(json.dumps(sol.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_fd(args) -> int:
    B = _load_network(args.network, args.mode)
    _check_size(B, args.mode)
    _emit(json.dumps({"fd_gdof": _fmt(fd_gdof(B))}) + "\n", args.out)
    return 0


def cmd_classify(args) -> int:
    B = _load_network(args.network, "exact")
    p = TwoRelayParams.from_matrix(B)
    reg = classify_fd_regime(p)
    out = {
        "fd_case": reg.label.value,
        "best_relay_suboptimal": reg.best_relay_suboptimal,
        "exception_set_O": reg.exception_set_O,
        "relays_swapped": reg.swapped,
        "zeroable_state": zeroable_state_n2(p).value,
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return 0


def cmd_mwbm(args) -> int:
    with open(args.matrix, encoding="utf-8") as fh:
        data = json.load(fh)
    rows = data["weights"] if isinstance(data, dict) else data
    exact = args.mode == "exact"
    conv = Fraction if exact else float
    weights = tuple(tuple(ABSENT if x is None else conv(x) for x in r) for r in rows)
    m = max_weight_matching(MaskedWeightMatrix(weights))
    _emit(json.dumps({"value": _fmt(m.value), "pairs": [list(p) for p in m.pairs]}) + "\n", args.out)
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig(args.n, args.trials, args.seed, Fraction(args.lo), Fraction(args.hi),
                      args.q, args.mode)
    report = run_conjecture_sweep(cfg, args.workers)
    _emit(report.to_csv(), args.out)
    if report.counterexamples:
        print(f"conjecture counterexamples in trials {list(report.counterexamples)}", file=sys.stderr)
    return 0


def cmd_gap_curves(args) -> int:
    _emit(run_gap_curves(args.n_max), args.out)
    for note in bounds.gap_warnings(args.n_max):
        print(f"warning: {note}", file=sys.stderr)
    return 0


def cmd_oracle_check(args) -> int:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.network:
        B = _load_network(args.network, "float")
        if B.n_relays > 4:
            raise ValueError("oracle-check on a network is limited to N <= 4")
        w.writerow(["snr", "gdof_estimate"])
        for snr, est in zip(SNR_LIST, gdof_numeric(B, SNR_LIST, seed=args.seed)):
            w.writerow([f"{snr:g}", f"{est:.6f}"])
        _emit(buf.getvalue(), args.out)
        return 0
    w.writerow(["trial", "rows", "cols", "mwbm"] + [f"err_{s:g}" for s in SNR_LIST] + ["ok"])
    results = run_convergence(args.trials, args.seed)
    for t in results:
        w.writerow([t.trial, t.shape[0], t.shape[1], f"{t.mwbm:.6f}"]
                   + [f"{e:.6f}" for e in t.errors] + [int(t.ok)])
    _emit(buf.getvalue(), args.out)
    passed = sum(t.ok for t in results)
    print(f"convergence: {passed}/{len(results)} trials decreasing and < 0.05 at 1e12", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdrelay", description="gDoF of half-duplex relay networks")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gdof", parents=[common], help="HD gDoF and optimal schedule of a network file")
    p.add_argument("network", help="network JSON ({n_relays, beta}) or CSV")
    p.add_argument("--min-support", action="store_true", help="search for a minimum-support schedule")
    p.set_defaults(func=cmd_gdof)

    p = sub.add_parser("fd", parents=[common], help="full-duplex gDoF")
    p.add_argument("network")
    p.set_defaults(func=cmd_fd)

    p = sub.add_parser("classify", parents=[common], help="two-relay regime and zeroable state")
    p.add_argument("network")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("mwbm", parents=[common], help="max-weight matching of a JSON matrix (null = absent)")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_mwbm)

    p = sub.add_parser("conjecture-sweep", parents=[common], help="active-state counts over random networks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--lo", default="0")
    p.add_argument("--hi", default="3")
    p.add_argument("--q", type=int, default=10, help="exponents are multiples of 1/q")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gap-curves", parents=[common], help="gap formulas as CSV")
    p.add_argument("--n-max", type=int, default=30)
    p.set_defaults(func=cmd_gap_curves)

    p = sub.add_parser("oracle-check", parents=[common], help="finite-SNR convergence checks")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--network", help="estimate the gDoF of this network numerically instead")
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"hdrelay {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
