import numpy as np
import pytest

from graphalign.cli import (
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    load_config_file,
    main,
    parse_range,
)
from graphalign.exceptions import InvalidInput
from graphalign.experiments import read_csv


def test_parse_range_single_value():
    assert parse_range("0.3") == [0.3]


def test_parse_range_inclusive():
    vals = parse_range("0:1:0.25")
    assert vals == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_parse_range_rejects_malformed():
    with pytest.raises(InvalidInput):
        parse_range("0:1")
    with pytest.raises(InvalidInput):
        parse_range("0:1:-0.1")


def test_trial_command_ok(capsys):
    code = main([
        "trial", "--n", "10", "--sigma", "0.1", "--solver", "grampa",
        "--seed", "3",
    ])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "frac_matched_hungarian=" in out


def test_trial_needs_single_cell():
    assert main(["trial", "--n", "10", "--n", "20", "--sigma", "0.1"]) == EXIT_INVALID
    assert main(["trial", "--sigma", "0.1"]) == EXIT_INVALID


def test_sweep_writes_csv(tmp_path, capsys):
    out = str(tmp_path / "s.csv")
    code = main([
        "sweep", "--n", "10", "--sigma", "0:0.4:0.4", "--reps", "2",
        "--solver", "grampa", "--out", out,
    ])
    assert code == EXIT_OK
    cols, rows = read_csv(out)
    assert len(rows) == 4


def test_sweep_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "n = 10\nsigma = 0.0 0.3\nreps = 2\nsolver = grampa\n"
        f"out = {tmp_path/'file.csv'}\n"
    )
    out_flag = str(tmp_path / "flag.csv")
    code = main(["sweep", "--config", str(cfg), "--out", out_flag])
    assert code == EXIT_OK
    _, rows = read_csv(out_flag)  # flag wins over the file's out=
    assert len(rows) == 4


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("solvr = grampa\n")
    assert main(["sweep", "--config", str(cfg), "--n", "5",
                 "--sigma", "0.1"]) == EXIT_INVALID


def test_config_file_malformed_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just a line\n")
    with pytest.raises(InvalidInput):
        load_config_file(str(cfg))


def test_threshold_missing_input():
    assert main(["threshold"]) == EXIT_INVALID


def test_threshold_nonexistent_file_is_io_error():
    assert main(["threshold", "--in", "/nonexistent/x.csv"]) == EXIT_IO


def test_threshold_and_plotdata_pipeline(tmp_path, capsys):
    # synthetic sweep CSV with a clean 0.5 crossing per n
    from graphalign.experiments import TrialRecord, _write_csv

    rows = []
    for n in (50, 100):
        th = n ** -0.5
        for s in np.round(np.arange(0.0, 0.42, 0.02), 10):
            rec = TrialRecord(
                n=n, sigma=float(s), rep=0, seed=0, solver="birkhoff",
                objective=0.0, fw_gap=0.0, iterations=0,
                frac_matched_greedy=1.0, frac_matched_hungarian=1.0,
                frob_dist_scaled=float(0.5 * s / th), commutator_ratio=0.0,
                wall_time_seconds=0.0,
            )
            rows.append(rec.csv_row())
    sweep_csv = str(tmp_path / "sweep.csv")
    _write_csv(sweep_csv, TrialRecord.csv_columns(), rows)

    out = str(tmp_path / "th.csv")
    code = main(["threshold", "--in", sweep_csv, "--out", out])
    assert code == EXIT_OK
    _, th_rows = read_csv(out)
    assert len(th_rows) == 2
    assert th_rows[0]["slope"] == pytest.approx(-0.5, abs=1e-9)

    summary_out = str(tmp_path / "sum.csv")
    assert main(["plotdata", "--in", sweep_csv, "--out", summary_out]) == EXIT_OK
    cols, _ = read_csv(summary_out)
    assert "mean_frob_dist_scaled" in cols


def test_certificate_command(tmp_path):
    out = str(tmp_path / "cert.csv")
    code = main([
        "certificate", "--n", "40", "--seeds", "1", "--max-iters", "60",
        "--out", out,
    ])
    assert code == EXIT_OK
    _, rows = read_csv(out)
    assert len(rows) == 1


def test_sweep_requires_grid():
    assert main(["sweep", "--out", "/tmp/x.csv"]) == EXIT_INVALID
