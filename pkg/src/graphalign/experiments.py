"""Seeded trial/sweep harness with deterministic CSV output.

Every output file is a pure function of (config, base_seed): trials derive
their own seed from the cell coordinates, rows are sorted by (n, sigma,
rep) regardless of execution order, and floats are serialized with
shortest-roundtrip ``repr``. Wall-clock time is kept on the in-memory
records but deliberately left blank in the CSV so reruns are
byte-identical.
"""

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import certificate as cert
from .assignment import greedy_round, hungarian_round, overlap_fraction
from .estimators import SOLVER_REGISTRY
from .exceptions import InvalidInput, MissingCrossing, NumericalFailure
from .linalg import sym_eigen
from .models import derive_seed, make_rng, perm_to_matrix, sample_wigner_pair
from .solvers import DEFAULT_ETA, DEFAULT_TOL_GAP

SCHEMA_LINE = "# schema=1"
SOLVERS = ("birkhoff", "simplex", "grampa")
ROUNDINGS = ("greedy", "hungarian", "both")


@dataclass(frozen=True)
class SweepConfig:
    n_list: tuple
    sigma_list: tuple
    reps: int = 10
    solver: str = "birkhoff"
    eta: float = DEFAULT_ETA
    rounding: str = "both"
    base_seed: int = 0
    tol_gap: float = DEFAULT_TOL_GAP
    max_iters: int = None
    out_path: str = "sweep.csv"
    workers: int = 1
    time_budget: float = None  # seconds; None = unlimited
    plant: str = "uniform"

    def __post_init__(self):
        if self.reps < 1:
            raise InvalidInput("reps must be >= 1")
        if any(s < 0 for s in self.sigma_list):
            raise InvalidInput("all sigma values must be >= 0")
        if self.solver not in SOLVERS:
            raise InvalidInput(f"solver must be one of {SOLVERS}")
        if self.rounding not in ROUNDINGS:
            raise InvalidInput(f"rounding must be one of {ROUNDINGS}")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    sigma: float
    rep: int
    seed: int
    solver: str
    objective: float
    fw_gap: float
    iterations: int
    frac_matched_greedy: float
    frac_matched_hungarian: float
    frob_dist_scaled: float
    commutator_ratio: float
    wall_time_seconds: float

    @classmethod
    def csv_columns(cls):
        return [f.name for f in fields(cls)]

    def csv_row(self):
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "wall_time_seconds":
                out.append("")  # kept out of the file for byte-determinism
            elif isinstance(v, float):
                out.append(repr(v))
            else:
                out.append(str(v))
        return out


def run_trial(n, sigma, solver, seed, rep=0, eta=DEFAULT_ETA,
              rounding="both", tol_gap=DEFAULT_TOL_GAP, max_iters=None,
              plant="uniform"):
    """Generate one instance, solve, round, and measure against the plant."""
    start = time.perf_counter()
    rng = make_rng(seed)
    pair = sample_wigner_pair(n, sigma, rng, plant=plant, seed=seed)
    cls = SOLVER_REGISTRY[solver]
    if solver == "grampa":
        est = cls(eta=eta)
    else:
        est = cls(tol_gap=tol_gap, max_iters=max_iters)
    try:
        est.fit(pair.a, pair.b)
    except NumericalFailure as exc:
        raise NumericalFailure(
            f"solver failed at n={n} sigma={sigma} seed={seed}: {exc}"
        ) from exc

    frac_greedy = float("nan")
    frac_hungarian = float("nan")
    if rounding in ("greedy", "both"):
        frac_greedy = overlap_fraction(greedy_round(est.X_), pair.pi_star)
    if rounding in ("hungarian", "both"):
        frac_hungarian = overlap_fraction(hungarian_round(est.X_), pair.pi_star)

    P = perm_to_matrix(pair.pi_star)
    frob_dist_scaled = float(np.linalg.norm(est.X_ - P, "fro") / math.sqrt(n))
    _, ratio, _ = cert.lemma5_bound(pair.a, pair.b, est.X_, sigma)
    wall = time.perf_counter() - start
    return TrialRecord(
        n=n, sigma=float(sigma), rep=rep, seed=seed, solver=solver,
        objective=est.objective_, fw_gap=est.fw_gap_, iterations=est.n_iter_,
        frac_matched_greedy=frac_greedy, frac_matched_hungarian=frac_hungarian,
        frob_dist_scaled=frob_dist_scaled, commutator_ratio=ratio,
        wall_time_seconds=wall,
    )


def _trial_from_cell(args):
    config, n, sigma, rep = args
    seed = derive_seed(config.base_seed, n, sigma, rep)
    return run_trial(
        n, sigma, config.solver, seed, rep=rep, eta=config.eta,
        rounding=config.rounding, tol_gap=config.tol_gap,
        max_iters=config.max_iters, plant=config.plant,
    )


def _write_csv(path, columns, rows, trailing_comments=()):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")
        for comment in trailing_comments:
            fh.write(comment + "\n")
    os.replace(tmp, path)


def read_csv(path):
    """Read a schema=1 CSV into (columns, list-of-dicts with parsed values)."""
    with open(path) as fh:
        first = fh.readline().strip()
        if first != SCHEMA_LINE:
            raise InvalidInput(f"{path}: missing '{SCHEMA_LINE}' header")
        columns = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            row = {}
            for col, val in zip(columns, parts):
                if val == "":
                    row[col] = None
                else:
                    try:
                        row[col] = int(val)
                    except ValueError:
                        try:
                            row[col] = float(val)
                        except ValueError:
                            row[col] = val
            rows.append(row)
    return columns, rows


def summary_path_for(out_path):
    root, ext = os.path.splitext(out_path)
    return root + ".summary" + (ext or ".csv")


_SUMMARY_METRICS = (
    "objective", "frac_matched_greedy", "frac_matched_hungarian",
    "frob_dist_scaled", "commutator_ratio",
)


def write_summary(records, path):
    """Per-(n, sigma, solver) means, standard deviations, and medians."""
    cells = {}
    for r in records:
        cells.setdefault((r.n, r.sigma, r.solver), []).append(r)
    columns = ["n", "sigma", "solver", "trials"]
    for m in _SUMMARY_METRICS:
        columns += [f"mean_{m}", f"std_{m}", f"median_{m}"]
    rows = []
    for (n, sigma, solver) in sorted(cells):
        group = cells[(n, sigma, solver)]
        row = [str(n), repr(float(sigma)), solver, str(len(group))]
        for m in _SUMMARY_METRICS:
            vals = np.array([getattr(r, m) for r in group], dtype=np.float64)
            row += [
                repr(float(np.mean(vals))),
                repr(float(np.std(vals))),
                repr(float(np.median(vals))),
            ]
        rows.append(row)
    _write_csv(path, columns, rows)


def run_sweep(config: SweepConfig):
    """Run all (n, sigma, rep) cells and write the data + summary CSVs.

    Returns the sorted list of records. With a time budget, unfinished
    cells are dropped and a resume marker naming the first pending cell is
    appended to the data CSV.
    """
    cells = [
        (config, n, sigma, rep)
        for n in config.n_list
        for sigma in config.sigma_list
        for rep in range(config.reps)
    ]
    records = []
    start = time.monotonic()
    pending_index = len(cells)

    def out_of_budget():
        return (
            config.time_budget is not None
            and time.monotonic() - start > config.time_budget
        )

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_trial_from_cell, c) for c in cells]
            for i, fut in enumerate(futures):
                if out_of_budget():
                    pending_index = i
                    for f in futures[i:]:
                        f.cancel()
                    break
                records.append(fut.result())
    else:
        for i, c in enumerate(cells):
            if out_of_budget():
                pending_index = i
                break
            records.append(_trial_from_cell(c))

    records.sort(key=lambda r: (r.n, r.sigma, r.rep))
    trailing = []
    if pending_index < len(cells):
        _, n, sigma, rep = cells[pending_index]
        trailing.append(f"# resume n={n} sigma={sigma!r} rep={rep}")
    _write_csv(
        config.out_path, TrialRecord.csv_columns(),
        [r.csv_row() for r in records], trailing_comments=trailing,
    )
    write_summary(records, summary_path_for(config.out_path))
    return records


def threshold_regression(records, cross_level=0.5):
    """Per-n crossing of mean scaled distance, plus a log-log slope fit.

    For each n the threshold sigma is linearly interpolated between the
    two grid points bracketing the first upward crossing of
    ``cross_level``. The slope is the least-squares fit of
    ``log(sigma_threshold)`` against ``log(n)``.
    """
    by_n = {}
    for r in records:
        by_n.setdefault(r.n, {}).setdefault(r.sigma, []).append(r.frob_dist_scaled)

    thresholds = {}
    missing = []
    for n in sorted(by_n):
        sigmas = sorted(by_n[n])
        means = [float(np.mean(by_n[n][s])) for s in sigmas]
        sigma_th = None
        for (s0, m0), (s1, m1) in zip(
            zip(sigmas, means), zip(sigmas[1:], means[1:])
        ):
            if m0 < cross_level <= m1:
                sigma_th = s0 + (cross_level - m0) / (m1 - m0) * (s1 - s0)
                break
        if sigma_th is None or sigma_th <= 0:
            missing.append(n)
        else:
            thresholds[n] = sigma_th
    if missing:
        raise MissingCrossing(missing)

    ns = np.array(sorted(thresholds), dtype=np.float64)
    ts = np.array([thresholds[int(n)] for n in ns])
    slope, intercept = np.polyfit(np.log(ns), np.log(ts), deg=1)
    return float(slope), float(intercept), thresholds


def write_thresholds(thresholds, slope, intercept, path, cross_level=0.5):
    columns = ["n", "sigma_threshold", "cross_level", "slope", "intercept"]
    rows = [
        [str(n), repr(float(thresholds[n])), repr(float(cross_level)),
         repr(float(slope)), repr(float(intercept))]
        for n in sorted(thresholds)
    ]
    _write_csv(path, columns, rows)


def run_certificate_trial(n, epsilon, seed, tol_gap=DEFAULT_TOL_GAP,
                          max_iters=None):
    """Build the certificate for one GOE draw and run every check.

    The claims are checked on a pair drawn at sigma = n^(-1/2 + eps) (the
    well-separation regime that Claims 5 and 6 address); the off-diagonal
    mass bound uses a Birkhoff solve at sigma = n^(-1 - eps) and the
    commutator diagnostic a solve at sigma = 0.1.
    """
    from .solvers import solve_birkhoff

    sigma_claims = min(1.0, float(n) ** (-0.5 + epsilon))
    rng = make_rng(seed)
    pair = sample_wigner_pair(n, sigma_claims, rng, seed=seed)
    eig = sym_eigen(pair.a)
    bundle = cert.build_certificate(eig, epsilon)
    c7_count, c7_bound, c7_pass = cert.check_claim7(eig, epsilon)
    c8_sum, c8_bound, c8_pass = cert.check_claim8(eig, epsilon)
    c5_val, c5_bound, c5_pass = cert.check_claim5(pair.a, pair.b, epsilon)
    c6_max, c6_bound, c6_pass = cert.check_claim6(pair.a, pair.z, epsilon)

    sigma_small = float(n) ** (-1.0 - epsilon)
    pair4 = sample_wigner_pair(n, sigma_small, make_rng(seed + 1), seed=seed + 1)
    rep4 = solve_birkhoff(pair4.a, pair4.b, tol_gap=tol_gap, max_iters=max_iters)
    l4_lhs, l4_rhs, l4_pass = cert.lemma4_bound(rep4.x, pair4.a, epsilon)

    pair5 = sample_wigner_pair(n, 0.1, make_rng(seed + 2), seed=seed + 2)
    rep5 = solve_birkhoff(pair5.a, pair5.b, tol_gap=tol_gap, max_iters=max_iters)
    _, l5_ratio, _ = cert.lemma5_bound(pair5.a, pair5.b, rep5.x, 0.1)

    d_frob_bound = 2.0 * float(n) ** (0.5 - epsilon / 32.0)
    return cert.CertificateReport(
        n=n, epsilon=float(epsilon), seed=seed,
        d_frob=bundle.d_frob, d_frob_bound=d_frob_bound,
        eigsep_sum=c8_sum, eigsep_bound=c8_bound,
        small_count=c7_count, small_bound=c7_bound,
        identity_residual=bundle.identity_residual,
        mu_dot_one=bundle.mu_dot_one,
        claim5_value=c5_val, claim5_bound=c5_bound, claim5_pass=c5_pass,
        claim6_max=c6_max, claim6_bound=c6_bound, claim6_pass=c6_pass,
        claim7_pass=c7_pass, claim8_pass=c8_pass,
        lemma4_lhs=l4_lhs, lemma4_rhs=l4_rhs, lemma4_pass=l4_pass,
        lemma5_ratio=l5_ratio, lemma5_pass=l5_ratio <= cert.LEMMA5_RATIO_CAP,
    )


def run_certificate_suite(n_list, epsilon, seeds, out_path,
                          tol_gap=DEFAULT_TOL_GAP, max_iters=None,
                          base_seed=0):
    """One certificate-report CSV row per (n, seed index)."""
    reports = []
    for n in n_list:
        for rep, _ in enumerate(range(seeds)):
            seed = derive_seed(base_seed, n, epsilon, rep)
            reports.append(
                run_certificate_trial(
                    n, epsilon, seed, tol_gap=tol_gap, max_iters=max_iters
                )
            )
    reports.sort(key=lambda r: (r.n, r.seed))
    _write_csv(
        out_path, cert.CertificateReport.csv_columns(),
        [r.csv_row() for r in reports],
    )
    return reports
