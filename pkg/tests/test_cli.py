import os

import numpy as np
import pytest

from bohmlib.cli import EXIT_CONFIG, EXIT_FAILURE, EXIT_IO, EXIT_OK, main
from bohmlib.config import RunConfig
from bohmlib.datasets.states import save_state, two_slit_state
from bohmlib.grid import GridSpec
from bohmlib.model import TwoSlitParams
from bohmlib.utils.io_utils import load_json, read_csv

SMALL = ["--set", "x_min=-64", "--set", "x_max=64", "--set", "n=1024", "--set", "t_final=2"]


def test_fields(tmp_path):
    out = str(tmp_path / "fields")
    assert main(["fields", "--out", out] + SMALL) == EXIT_OK
    manifest = load_json(os.path.join(out, "manifest.json"))
    assert manifest["files"] == ["fields_t0.csv", "fields_t1.csv", "fields_t2.csv"]
    assert manifest["times"] == [0.0, 1.0, 2.0]
    assert manifest["mode"] == "analytic"
    config = RunConfig.from_dict(manifest["config"])
    assert config.n == 1024 and config.out == out
    columns = read_csv(os.path.join(out, "fields_t2.csv"))
    assert list(columns) == manifest["columns"]
    assert columns["x"].size == 1024


def test_numeric_fields_track_closed_form(tmp_path):
    out = str(tmp_path / "numeric")
    assert main(["fields", "--mode", "numeric", "--out", out] + SMALL) == EXIT_OK
    manifest = load_json(os.path.join(out, "manifest.json"))
    assert manifest["mode"] == "numeric"
    assert len(manifest["l2_gaps"]) == 3
    assert manifest["max_l2_gap"] < 1e-6


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"x_min": -64, "x_max": 64, "n": 1024, "t_final": 1, "emit_every": 500}')
    out = str(tmp_path / "from_file")
    assert main(["fields", "--config", str(path), "--set", "d=8", "--out", out]) == EXIT_OK
    manifest = load_json(os.path.join(out, "manifest.json"))
    assert manifest["times"] == [0.0, 0.5, 1.0]
    assert manifest["config"]["d"] == 8.0


def test_invalid_configuration(tmp_path, capsys):
    assert main(["fields", "--set", "n=1000", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "power of two" in capsys.readouterr().err
    assert main(["fields", "--set", "colour=blue", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert not os.listdir(str(tmp_path))


def test_unreadable_config(tmp_path):
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == EXIT_IO
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["verify", "--config", str(broken)]) == EXIT_CONFIG


def test_output_path_is_a_file(tmp_path):
    target = tmp_path / "taken"
    target.write_text("")
    assert main(["fields", "--out", str(target)] + SMALL) == EXIT_IO


def test_single_trajectory_stays_on_axis(tmp_path):
    out = str(tmp_path / "one")
    assert main(["trajectories", "--set", "count=1", "--out", out] + SMALL) == EXIT_OK
    columns = read_csv(os.path.join(out, "ensemble.csv"))
    assert columns["t"].size == 201
    assert np.max(np.abs(columns["x"])) < 1e-10
    sidecar = load_json(os.path.join(out, "ensemble.json"))
    assert sidecar["aborts"]["aborted"] == 0
    assert sidecar["provenance"]["config"]["count"] == 1


def test_seeded_trajectories_are_reproducible(tmp_path):
    args = ["trajectories", "--set", "count=20", "--set", "sampler_mode=seeded-random", "--set", "seed=11"] + SMALL
    first, second = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(args + ["--out", first]) == EXIT_OK
    assert main(args + ["--out", second]) == EXIT_OK
    with open(os.path.join(first, "ensemble.csv"), "rb") as a, open(os.path.join(second, "ensemble.csv"), "rb") as b:
        assert a.read() == b.read()


def test_default_trajectories(tmp_path):
    out = str(tmp_path / "default")
    assert main(["trajectories", "--out", out]) == EXIT_OK
    sidecar = load_json(os.path.join(out, "ensemble.json"))
    assert sidecar["sampler"]["count"] == 200
    assert sidecar["aborts"]["aborted"] == 0
    columns = read_csv(os.path.join(out, "ensemble.csv"))
    assert columns["x"].size == 200 * 1001


def test_numeric_trajectories(tmp_path):
    out = str(tmp_path / "numeric")
    args = ["trajectories", "--mode", "numeric", "--set", "count=20", "--set", "dt=0.01", "--out", out] + SMALL
    assert main(args) == EXIT_OK
    sidecar = load_json(os.path.join(out, "ensemble.json"))
    assert sidecar["provenance"]["velocity"]["provider"] == "frames"
    assert sidecar["provenance"]["velocity"]["frames"] == 201


def test_numeric_trajectories_without_evolution(tmp_path):
    out = str(tmp_path / "release")
    args = ["trajectories", "--mode", "numeric", "--set", "count=5", "--out", out] + SMALL + ["--set", "t_final=0"]
    assert main(args) == EXIT_OK
    columns = read_csv(os.path.join(out, "ensemble.csv"))
    assert columns["t"].size == 5 and not np.any(columns["t"])
    sidecar = load_json(os.path.join(out, "ensemble.json"))
    assert sidecar["provenance"]["velocity"]["frames"] == 1
    assert sidecar["aborts"]["aborted"] == 0


def test_raw_fields(tmp_path):
    out = str(tmp_path / "raw")
    assert main(["fields", "--set", "raw=true", "--out", out] + SMALL) == EXIT_OK
    columns = read_csv(os.path.join(out, "fields_t0.csv"))
    # bare sum of the packets: one at each slit centre
    assert columns["rho"][np.argmin(np.abs(columns["x"] - 5.0))] == pytest.approx(1.0, rel=1e-12)
    assert main(["fields", "--mode", "numeric", "--set", "raw=true", "--out", out] + SMALL) == EXIT_CONFIG


def test_initial_state_file(tmp_path):
    grid = GridSpec(-64.0, 64.0, 1024)
    path = str(tmp_path / "psi0.csv")
    save_state(two_slit_state(TwoSlitParams(), grid, 0.0), path)
    loaded, built = str(tmp_path / "loaded"), str(tmp_path / "built")
    args = ["fields", "--mode", "numeric"] + SMALL
    assert main(args + ["--set", "initial_state=" + path, "--out", loaded]) == EXIT_OK
    assert main(args + ["--out", built]) == EXIT_OK
    manifest = load_json(os.path.join(loaded, "manifest.json"))
    assert manifest["config"]["initial_state"] == path
    assert "l2_gaps" not in manifest
    a = read_csv(os.path.join(loaded, "fields_t2.csv"))["rho"]
    b = read_csv(os.path.join(built, "fields_t2.csv"))["rho"]
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12 * b.max())


def test_initial_state_on_another_grid(tmp_path, capsys):
    path = str(tmp_path / "psi0.csv")
    save_state(two_slit_state(TwoSlitParams(), GridSpec(-32.0, 32.0, 1024), 0.0), path)
    args = ["fields", "--mode", "numeric", "--set", "initial_state=" + path, "--out", str(tmp_path / "out")]
    assert main(args + SMALL) == EXIT_CONFIG
    assert "does not match grid" in capsys.readouterr().err
    missing = ["fields", "--mode", "numeric", "--set", "initial_state=" + str(tmp_path / "none.csv")]
    assert main(missing + SMALL + ["--out", str(tmp_path / "out")]) == EXIT_IO


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert "bohmlib" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_defaults(tmp_path):
    assert main(["verify", "--out", str(tmp_path)]) == EXIT_OK
    report = load_json(os.path.join(str(tmp_path), "report.json"))
    assert report["passed"] and not report["failures"]


@pytest.mark.slow
def test_verify_reports_failures(tmp_path, capsys):
    assert main(["verify", "--set", "dt=0.5", "--out", str(tmp_path)]) == EXIT_FAILURE
    assert "FAILED harmonic_l2" in capsys.readouterr().err
