"""Session fixtures: real harness CSVs produced through the primary CLI.

The frontend only ever sees CSV files, so the fixtures shell out to
``graphalign`` rather than importing it.
"""

import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "graphalign.cli"]


def run_cli(args):
    proc = subprocess.run(CLI + args, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def sweep_csvs(tmp_path_factory):
    """Per-solver single-n sweeps (fig1-left/center inputs)."""
    root = tmp_path_factory.mktemp("sweeps")
    paths = {}
    for solver in ("birkhoff", "simplex", "grampa"):
        out = str(root / f"{solver}.csv")
        run_cli([
            "sweep", "--n", "16", "--sigma", "0:0.6:0.2", "--reps", "2",
            "--solver", solver, "--max-iters", "40", "--seed", "7",
            "--out", out,
        ])
        paths[solver] = out
    return paths


@pytest.fixture(scope="session")
def multi_n_csv(tmp_path_factory):
    """Multi-n birkhoff sweep (fig1-right input, threshold input)."""
    out = str(tmp_path_factory.mktemp("multi") / "multi.csv")
    run_cli([
        "sweep", "--n", "20", "--n", "30", "--sigma", "0:0.6:0.1",
        "--reps", "1", "--solver", "birkhoff", "--max-iters", "40",
        "--seed", "7", "--out", out,
    ])
    return out


@pytest.fixture(scope="session")
def threshold_csv(tmp_path_factory, multi_n_csv):
    out = str(tmp_path_factory.mktemp("th") / "thresholds.csv")
    run_cli(["threshold", "--in", multi_n_csv, "--out", out])
    return out
