import csv
import io
import json
import math

import numpy as np
import pytest

from dualkin import cli
from dualkin.errors import ConfigError
from dualkin.fourbar import assemble, discriminant
from dualkin.reference import TABLE2, TABLE2_THETA, table1_json, table1_params, table1_path


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def non_grashof_file(tmp_path):
    doc = table1_json() | {"alpha1": 0.8}
    path = tmp_path / "ng.json"
    path.write_text(json.dumps(doc))
    return path


def test_sweep_table1(capsys):
    code, out, err = run(["sweep", "--params", str(table1_path())], capsys)
    assert code == 0 and err == ""
    rows = [line.split() for line in out.splitlines()[1:]]
    assert len(rows) == 10
    got = np.array(rows, dtype=float)
    np.testing.assert_allclose(got[:, 0], TABLE2_THETA, atol=1e-5)
    np.testing.assert_allclose(got[:, 1:], TABLE2[:, 1:], atol=1e-3)


def test_sweep_csv_round_trip(capsys):
    code, out, _ = run(["sweep", "--params", str(table1_path()), "--format", "csv", "--precision", "9"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert tuple(rows[0]) == cli.CSV_HEADER
    assert len(rows) == 10
    for row in rows:
        r = np.array([float(row[k]) for k in ("x", "y", "z")])
        v = np.array([float(row[k]) for k in ("vx", "vy", "vz")])
        assert np.linalg.norm(r) == pytest.approx(1.0, abs=1e-8)
        assert r @ v == pytest.approx(0.0, abs=1e-8)


def test_sweep_is_deterministic(capsys):
    argv = ["sweep", "--params", str(table1_path()), "--format", "csv"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_sweep_single_step(capsys):
    code, out, _ = run(["sweep", "--params", str(table1_path()), "--steps", "1"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 2


def test_sweep_rates(capsys):
    p = table1_params()
    base = cli.sweep(cli.RunConfig(p, steps=4))
    scaled = cli.sweep(cli.RunConfig(p, steps=4, theta_dot=2.0))
    for a, b in zip(base.samples, scaled.samples):
        np.testing.assert_allclose(b.velocity, 2 * a.velocity, rtol=1e-15)
        np.testing.assert_allclose(b.acceleration, 4 * a.acceleration, rtol=1e-15)


def test_sweep_reports_skipped_points(non_grashof_file, capsys):
    code, out, err = run(["sweep", "--params", str(non_grashof_file), "--steps", "36"], capsys)
    assert code == 0
    n_rows = len(out.splitlines()) - 1
    skipped = [line for line in err.splitlines() if line.startswith("skipped theta=")]
    assert 0 < len(skipped) < 36
    assert n_rows + len(skipped) == 36
    assert f"{len(skipped)} of 36 grid points skipped" in err


def test_verify_table1(capsys):
    code, out, _ = run(["verify", "--params", str(table1_path())], capsys)
    assert code == cli.EXIT_OK
    assert out.rstrip().endswith("60/60 rows passed, 0 skipped: PASS")


def test_verify_too_strict_fails(capsys):
    code, out, _ = run(["verify", "--params", str(table1_path()), "--rtol1", "1e-14", "--atol", "1e-15"], capsys)
    assert code == cli.EXIT_VERIFY_FAILED
    assert "FAIL" in out


def test_verify_nothing_feasible(non_grashof_file, capsys):
    p = table1_params().replace(alpha1=0.8)
    f = assemble(p)
    grid = np.linspace(0, 2 * math.pi, 721)
    bad = grid[[discriminant(t, p, f) < -1e-3 for t in grid]]
    lo, hi = bad[0], bad[0] + 0.01
    assert discriminant(hi, p, f) < 0
    argv = ["verify", "--params", str(non_grashof_file), "--theta-start", str(lo), "--theta-end", str(hi), "--steps", "3"]
    code, _, err = run(argv, capsys)
    assert code == cli.EXIT_NOTHING_VERIFIED
    assert "nothing was verified" in err


def test_verify_partial_skips_still_pass(non_grashof_file, capsys):
    code, _, err = run(["verify", "--params", str(non_grashof_file), "--steps", "36"], capsys)
    assert code == cli.EXIT_OK
    assert "rows skipped" in err


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--params", str(table1_path()), "--format", "csv", "--steps", "2"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 1 + 2 * 6


@pytest.mark.parametrize(
    "doc",
    [
        {"x1": [1, 0, 0]},
        table1_json() | {"x4": [0.5, 0.5, 0.5]},
        table1_json() | {"x4": [1, 0]},
        table1_json() | {"extra": 1},
        table1_json() | {"alpha1": 0.0},
        table1_json() | {"branch_sign": 2},
        [1, 2, 3],
    ],
)
def test_bad_params_file(tmp_path, capsys, doc):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(["sweep", "--params", str(path)], capsys)
    assert code == cli.EXIT_CONFIG
    assert err.startswith("error:")


def test_unreadable_params(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run(["sweep", "--params", str(path)], capsys)[0] == cli.EXIT_CONFIG
    assert run(["sweep", "--params", str(tmp_path / "missing.json")], capsys)[0] == cli.EXIT_CONFIG


def test_unassemblable_params(tmp_path, capsys):
    path = tmp_path / "a.json"
    path.write_text(json.dumps(table1_json() | {"alpha2": 1e-9}))
    assert run(["sweep", "--params", str(path)], capsys)[0] == cli.EXIT_CONFIG


@pytest.mark.parametrize(
    "extra", [["--steps", "0"], ["--theta-start", "1", "--theta-end", "0"], ["--precision", "-1"], ["--h1", "0"]]
)
def test_bad_run_options(capsys, extra):
    code, _, _ = run(["verify", "--params", str(table1_path()), *extra], capsys)
    assert code == cli.EXIT_CONFIG


def test_run_config_grid_is_half_open():
    cfg = cli.RunConfig(table1_params(), steps=4)
    assert cfg.grid() == [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
    with pytest.raises(ConfigError):
        cli.RunConfig(table1_params(), output_format="xml")


def test_negative_zero_not_printed():
    assert cli._fmt(-1e-9, 5) == "0.00000"
    assert cli._fmt(-0.5, 2) == "-0.50"
