import pytest

from bohmlib.config import RunConfig
from bohmlib.exceptions import ConfigError
from bohmlib.grid import GridSpec
from bohmlib.model import TwoSlitParams
from bohmlib.utils.io_utils import write_json


def test_defaults():
    config = RunConfig()
    assert config.params == TwoSlitParams()
    assert config.grid == GridSpec(-128.0, 128.0, 8192)
    assert (config.t_final, config.dt, config.emit_every, config.traj_dt) == (10.0, 1e-3, 1000, 1e-2)
    assert config.mode == "analytic" and config.count == 200


def test_round_trip():
    config = RunConfig(d=4.0, count=31, mode="numeric", stratified=True)
    assert RunConfig.from_dict(config.to_dict()) == config


def test_violations_are_aggregated():
    with pytest.raises(ConfigError) as excinfo:
        RunConfig.from_dict({"n": 100, "dt": -1.0, "mode": "quantum"})
    violations = excinfo.value.violations
    assert len(violations) == 3
    assert any("power of two" in v for v in violations)
    assert "3 violation(s)" in str(excinfo.value)


def test_unknown_and_unreadable_keys():
    with pytest.raises(ConfigError) as excinfo:
        RunConfig.from_dict({"slits": 3, "count": "many", "n": 12.5})
    violations = excinfo.value.violations
    assert "unknown key 'slits'" in violations
    assert any(v.startswith("cannot read count=") for v in violations)
    assert any(v.startswith("cannot read n=") for v in violations)


def test_non_mapping_rejected():
    with pytest.raises(ConfigError):
        RunConfig.from_dict([1, 2, 3])


def test_overrides_are_coerced():
    config = RunConfig().with_overrides(["n=4096", "stratified=yes", "d=0", " seed = 3 "])
    assert config.n == 4096 and isinstance(config.n, int)
    assert config.stratified is True
    assert config.d == 0.0 and config.seed == 3
    with pytest.raises(ConfigError, match="key=value"):
        RunConfig().with_overrides(["n"])
    with pytest.raises(ConfigError):
        RunConfig().with_overrides(["stratified=maybe"])


def test_numeric_mode_needs_commensurate_steps():
    RunConfig(mode="numeric", dt=1e-3, traj_dt=1e-2)
    with pytest.raises(ConfigError, match="multiple of dt"):
        RunConfig(mode="numeric", dt=3e-3, traj_dt=1e-2)
    RunConfig(mode="analytic", dt=3e-3, traj_dt=1e-2)


def test_regime_thresholds_ordered():
    with pytest.raises(ConfigError):
        RunConfig(regime_low=0.9, regime_high=0.5)


def test_from_file(tmp_path):
    path = str(tmp_path / "run.json")
    write_json(path, {"d": 20.0, "out": "results"})
    config = RunConfig.from_file(path)
    assert config.d == 20.0 and config.out == "results"


def test_source_options_need_matching_mode():
    assert RunConfig(raw=True).raw
    assert RunConfig().with_overrides(["raw=yes"]).raw is True
    assert RunConfig(mode="numeric", initial_state="psi0.csv").initial_state == "psi0.csv"
    with pytest.raises(ConfigError, match="initial_state needs mode 'numeric'"):
        RunConfig(initial_state="psi0.csv")
    with pytest.raises(ConfigError, match="raw needs mode 'analytic'"):
        RunConfig(mode="numeric", raw=True)
