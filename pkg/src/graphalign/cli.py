"""Command-line harness.

Subcommands: ``trial``, ``sweep``, ``certificate``, ``threshold``,
``plotdata``. Flags mirror a flat ``key=value`` config file (flags win).
Exit codes: 0 success, 2 invalid config, 3 numerical failure, 4 I/O error.
"""

import argparse
import sys

from .exceptions import (
    GraphAlignError,
    InvalidInput,
    MissingCrossing,
    NumericalFailure,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def parse_range(text):
    """Parse a repeatable value list or a ``lo:hi:step`` range (inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidInput(f"bad range {text!r}, expected lo:hi:step")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0:
            raise InvalidInput("range step must be > 0")
        out = []
        k = 0
        while True:
            v = lo + k * step
            if v > hi + 1e-12:
                break
            out.append(round(v, 12))
            k += 1
        return out
    return [float(text)]


def _collect(values):
    out = []
    for v in values or []:
        out.extend(parse_range(str(v)))
    return out


def load_config_file(path):
    """Flat key=value file; blank lines and '#' comments ignored."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidInput(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


_CONFIG_PARSERS = {
    "n": lambda v: [int(x) for x in _collect(v.split())],
    "sigma": lambda v: _collect(v.split()),
    "reps": int,
    "solver": str,
    "eta": float,
    "rounding": str,
    "seed": int,
    "tol_gap": float,
    "max_iters": int,
    "workers": int,
    "time_budget": float,
    "out": str,
    "epsilon": float,
    "seeds": int,
    "cross_level": float,
    "in": str,
}


def merge_config(args):
    """Fold a config file under the parsed flags; flags override the file."""
    merged = dict(vars(args))
    cfg_path = merged.pop("config", None)
    if cfg_path:
        file_vals = load_config_file(cfg_path)
        for key, raw in file_vals.items():
            if key not in _CONFIG_PARSERS:
                raise InvalidInput(f"unknown config key {key!r}")
            dest = "in_path" if key == "in" else key
            if merged.get(dest) is None:
                merged[dest] = _CONFIG_PARSERS[key](raw)
    return merged


def build_parser():
    p = argparse.ArgumentParser(
        prog="graphalign",
        description="Graph alignment experiments on the Gaussian Wigner model",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="key=value config file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None)

    def add_solver_opts(sp):
        sp.add_argument("--solver", choices=["birkhoff", "simplex", "grampa"],
                        default=None)
        sp.add_argument("--eta", type=float, default=None)
        sp.add_argument("--rounding", choices=["greedy", "hungarian", "both"],
                        default=None)
        sp.add_argument("--tol-gap", dest="tol_gap", type=float, default=None)
        sp.add_argument("--max-iters", dest="max_iters", type=int, default=None)

    sp = sub.add_parser("trial", help="run a single seeded trial")
    add_common(sp)
    add_solver_opts(sp)
    sp.add_argument("--n", action="append", default=None)
    sp.add_argument("--sigma", action="append", default=None)

    sp = sub.add_parser("sweep", help="run an (n, sigma, rep) grid to CSV")
    add_common(sp)
    add_solver_opts(sp)
    sp.add_argument("--n", action="append", default=None)
    sp.add_argument("--sigma", action="append", default=None,
                    help="repeatable value or lo:hi:step range")
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--time-budget", dest="time_budget", type=float,
                    default=None)

    sp = sub.add_parser("certificate", help="run the certificate check suite")
    add_common(sp)
    sp.add_argument("--n", action="append", default=None)
    sp.add_argument("--epsilon", type=float, default=None)
    sp.add_argument("--seeds", type=int, default=None)
    sp.add_argument("--tol-gap", dest="tol_gap", type=float, default=None)
    sp.add_argument("--max-iters", dest="max_iters", type=int, default=None)

    sp = sub.add_parser("threshold", help="threshold regression from sweep CSV")
    add_common(sp)
    sp.add_argument("--in", dest="in_path", default=None)
    sp.add_argument("--cross-level", dest="cross_level", type=float,
                    default=None)

    sp = sub.add_parser("plotdata", help="per-cell summary CSV from sweep CSV")
    add_common(sp)
    sp.add_argument("--in", dest="in_path", default=None)
    return p


def _records_from_csv(path):
    from .experiments import TrialRecord, read_csv

    _, rows = read_csv(path)
    records = []
    for row in rows:
        vals = {}
        for name in TrialRecord.csv_columns():
            v = row.get(name)
            if name == "wall_time_seconds":
                v = float("nan") if v is None else float(v)
            vals[name] = v
        records.append(TrialRecord(**vals))
    return records


def cmd_trial(opts):
    from .experiments import run_trial
    from .models import derive_seed

    ns = [int(v) for v in opts.get("n") and _collect(opts["n"]) or []]
    sigmas = _collect(opts.get("sigma"))
    if len(ns) != 1 or len(sigmas) != 1:
        raise InvalidInput("trial needs exactly one --n and one --sigma")
    base_seed = opts.get("seed") or 0
    seed = derive_seed(base_seed, ns[0], sigmas[0], 0)
    record = run_trial(
        ns[0], sigmas[0], opts.get("solver") or "birkhoff", seed,
        eta=opts.get("eta") or 0.2, rounding=opts.get("rounding") or "both",
        tol_gap=opts.get("tol_gap") or 1e-6, max_iters=opts.get("max_iters"),
    )
    for name in record.csv_columns():
        print(f"{name}={getattr(record, name)}")
    return EXIT_OK


def cmd_sweep(opts):
    from .experiments import SweepConfig, run_sweep

    config = SweepConfig(
        n_list=tuple(int(v) for v in _collect(opts.get("n"))),
        sigma_list=tuple(_collect(opts.get("sigma"))),
        reps=opts.get("reps") or 10,
        solver=opts.get("solver") or "birkhoff",
        eta=opts.get("eta") or 0.2,
        rounding=opts.get("rounding") or "both",
        base_seed=opts.get("seed") or 0,
        tol_gap=opts.get("tol_gap") or 1e-6,
        max_iters=opts.get("max_iters"),
        out_path=opts.get("out") or "sweep.csv",
        workers=opts.get("workers") or 1,
        time_budget=opts.get("time_budget"),
    )
    if not config.n_list or not config.sigma_list:
        raise InvalidInput("sweep needs --n and --sigma")
    records = run_sweep(config)
    print(f"wrote {len(records)} rows to {config.out_path}")
    return EXIT_OK


def cmd_certificate(opts):
    from .experiments import run_certificate_suite

    n_list = [int(v) for v in _collect(opts.get("n"))]
    if not n_list:
        raise InvalidInput("certificate needs --n")
    reports = run_certificate_suite(
        n_list,
        epsilon=opts.get("epsilon") or 0.5,
        seeds=opts.get("seeds") or 10,
        out_path=opts.get("out") or "certificate.csv",
        tol_gap=opts.get("tol_gap") or 1e-6,
        max_iters=opts.get("max_iters"),
        base_seed=opts.get("seed") or 0,
    )
    print(f"wrote {len(reports)} rows to {opts.get('out') or 'certificate.csv'}")
    return EXIT_OK


def cmd_threshold(opts):
    from .experiments import threshold_regression, write_thresholds

    in_path = opts.get("in_path")
    if not in_path:
        raise InvalidInput("threshold needs --in")
    records = _records_from_csv(in_path)
    cross = opts.get("cross_level") or 0.5
    slope, intercept, thresholds = threshold_regression(records, cross)
    out = opts.get("out") or "thresholds.csv"
    write_thresholds(thresholds, slope, intercept, out, cross)
    print(f"slope={slope} intercept={intercept} out={out}")
    return EXIT_OK


def cmd_plotdata(opts):
    from .experiments import summary_path_for, write_summary

    in_path = opts.get("in_path")
    if not in_path:
        raise InvalidInput("plotdata needs --in")
    records = _records_from_csv(in_path)
    out = opts.get("out") or summary_path_for(in_path)
    write_summary(records, out)
    print(f"wrote summary to {out}")
    return EXIT_OK


_COMMANDS = {
    "trial": cmd_trial,
    "sweep": cmd_sweep,
    "certificate": cmd_certificate,
    "threshold": cmd_threshold,
    "plotdata": cmd_plotdata,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = merge_config(args)
        return _COMMANDS[args.command](opts)
    except (InvalidInput, MissingCrossing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GraphAlignError as exc:  # any other package error
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
