import csv
import io
import math

import numpy as np
import pytest

from mirrorent.cli import (
    EVOLVE_HEADER,
    SWEEP_HEADER,
    THERMAL_HEADER,
    fmt,
    main,
    parse_phase_mode,
)
from mirrorent.entanglement import analytic_logneg


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return header, [dict(zip(header, r)) for r in reader]


def col(rows, key):
    return np.array([float(r[key]) for r in rows])


def test_fmt():
    assert fmt(None) == ""
    assert fmt(-0.0) == "0"
    assert fmt(3) == "3"
    assert fmt(1 / 3) == "0.333333333"


def test_parse_phase_mode():
    assert parse_phase_mode("zero") == ("zero", -1)
    assert parse_phase_mode("indexed:3") == ("indexed", 3)
    for bad in ("spin", "fig3:1", "indexed:x"):
        with pytest.raises(Exception):
            parse_phase_mode(bad)


def test_zero_phase_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--beta-min", "0.01", "--beta-max", "2",
                       "--beta-steps", "100", "--phase-mode", "zero")
    assert code == 0
    header, rows = rows_of(out)
    assert header == SWEEP_HEADER
    assert len(rows) == 100
    assert np.all(np.abs(col(rows, "EN_minus") - 1.0) < 1e-12)
    assert col(rows, "EN_plus")[-1] > 0.99
    assert np.all(col(rows, "EN_minus") >= col(rows, "EN_plus"))
    assert np.all(col(rows, "P_plus") >= col(rows, "P_minus"))


def test_fig3_sweep_oscillates(capsys):
    code, out, _ = run(capsys, "sweep", "--beta-min", "0", "--beta-max", "2",
                       "--beta-steps", "201", "--phase-mode", "fig3")
    assert code == 0
    _, rows = rows_of(out)
    for key in ("EN_plus", "P_plus"):
        steps = np.sign(np.diff(col(rows, key)))
        steps = steps[steps != 0]
        assert np.count_nonzero(np.diff(steps)) >= 2, key


def test_single_point_at_zero(capsys, caplog):
    code, out, _ = run(capsys, "sweep", "--beta-min", "0", "--beta-max", "0",
                         "--beta-steps", "1")
    assert code == 0
    _, rows = rows_of(out)
    assert len(rows) == 1
    assert float(rows[0]["EN_plus"]) == 0.0
    assert float(rows[0]["P_plus"]) == 1.0
    assert rows[0]["EN_minus"] == ""
    assert "degenerate" in caplog.text


def test_sweep_values_in_range(capsys):
    _, out, _ = run(capsys, "sweep", "--beta-steps", "41", "--phase-mode", "indexed:2")
    _, rows = rows_of(out)
    for key in ("EN_plus", "EN_minus"):
        vals = np.array([float(r[key]) for r in rows if r[key]])
        assert np.all(np.isfinite(vals)) and np.all(vals >= 0)
    for key in ("P_plus", "P_minus"):
        assert np.all((col(rows, key) >= 0) & (col(rows, key) <= 1))


def test_unwritable_path(capsys, caplog, tmp_path):
    code, _, _ = run(capsys, "sweep", "--beta-steps", "3", "--out",
                       str(tmp_path / "missing" / "x.csv"))
    assert code == 2
    assert "cannot write" in caplog.text


def test_usage_errors(capsys):
    assert run(capsys, "sweep", "--beta-min", "2", "--beta-max", "1")[0] == 2
    assert run(capsys, "sweep", "--beta-steps", "0")[0] == 2
    assert run(capsys, "sweep", "--phase-mode", "bogus")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_write_to_file(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    assert run(capsys, "sweep", "--beta-steps", "5", "--out", str(path))[0] == 0
    assert path.read_text().splitlines()[0] == ",".join(SWEEP_HEADER)


def test_verify_default_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,max_error,threshold,status"
    names = [line.split(",")[0] for line in lines[1:]]
    for required in ("recurrence_tau_n", "oracle_evolution", "negativity_pm",
                     "branch_reconstruction", "traced_state_ppt"):
        assert required in names
    assert all(line.endswith("PASS") for line in lines[1:])


def test_verify_tiny_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--tolerance", "1e-30")
    assert code == 1
    failing = [line.split(",") for line in out.strip().splitlines()[1:] if line.endswith("FAIL")]
    assert failing
    for name, err, thr, _ in failing:
        assert float(thr) == 1e-30
        assert math.isfinite(float(err))


def test_thermal_zero_matches_sweep(capsys):
    code, out, _ = run(capsys, "thermal", "--n-th", "0", "--beta", "0.7", "--samples", "50")
    assert code == 0
    header, rows = rows_of(out)
    assert header == THERMAL_HEADER
    _, sweep = rows_of(run(capsys, "sweep", "--beta-min", "0.7", "--beta-max", "0.7",
                           "--beta-steps", "1")[1])
    ref = {"+": float(sweep[0]["EN_plus"]), "-": float(sweep[0]["EN_minus"])}
    assert {r["sign"] for r in rows} == {"+", "-"}
    for r in rows:
        assert abs(float(r["EN_numeric"]) - ref[r["sign"]]) < 2e-3
        assert abs(float(r["purity"]) - 1) < 1e-9
        assert r["samples"] == "50" and r["seed"] == "0"


def test_thermal_reruns_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert run(capsys, "thermal", "--n-th", "0.3", "--beta", "0.6", "--samples", "300",
                   "--seed", "9", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_thermal_purity_decreasing(capsys):
    _, out, _ = run(capsys, "thermal", "--n-th", "0,0.2,0.5", "--beta", "1", "--sign", "-",
                    "--samples", "1000", "--seed", "4")
    _, rows = rows_of(out)
    purity = col(rows, "purity")
    assert len(purity) == 3
    assert np.all(np.diff(purity) < 0), purity


def test_evolve_rows(capsys):
    beta = 0.5
    code, out, _ = run(capsys, "evolve", "--beta", str(beta), "--wt",
                       f"0,{math.pi!r},{2 * math.pi!r}")
    assert code == 0
    header, rows = rows_of(out)
    assert header == EVOLVE_HEADER
    r0, rpi, r2pi = rows
    assert float(r0["eta_re"]) == 0 and float(r0["eta_im"]) == 0
    assert abs(abs(complex(float(rpi["eta_re"]), float(rpi["eta_im"]))) - 2 * beta) < 1e-8
    assert abs(float(r2pi["fidelity_to_initial"]) - 1) < 1e-10
    assert float(rpi["fidelity_to_initial"]) < 1


def test_evolve_grid_flags(capsys):
    _, out, _ = run(capsys, "evolve", "--beta", "0.3", "--wt-min", "0", "--wt-max", "1",
                    "--wt-steps", "5")
    _, rows = rows_of(out)
    assert np.allclose(col(rows, "wt"), np.linspace(0, 1, 5))


def test_config_file_defaults_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep settings\nbeta-min = 0.5\nbeta_max = 1.0\nbeta-steps = 3\n")
    _, out, _ = run(capsys, "--config", str(cfg), "sweep")
    assert np.allclose(col(rows_of(out)[1], "beta"), [0.5, 0.75, 1.0])
    _, out, _ = run(capsys, "--config", str(cfg), "sweep", "--beta-steps", "2")
    assert np.allclose(col(rows_of(out)[1], "beta"), [0.5, 1.0])


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("no-such-key = 1\n")
    assert run(capsys, "--config", str(bad), "sweep")[0] == 2
    bad.write_text("beta-steps = many\n")
    assert run(capsys, "--config", str(bad), "sweep")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "absent.cfg"), "sweep")[0] == 2


def test_sweep_matches_analytic(capsys):
    _, out, _ = run(capsys, "sweep", "--beta-min", "0.3", "--beta-max", "0.3",
                    "--beta-steps", "1", "--phase-mode", "indexed:1")
    row = rows_of(out)[1][0]
    theta = 2 * math.pi * 3 * 0.3**2
    assert abs(float(row["theta"]) - theta) < 1e-8
    assert abs(float(row["EN_plus"]) - analytic_logneg(0.3, theta, +1).value) < 1e-8
