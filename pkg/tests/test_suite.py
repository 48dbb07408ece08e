import pytest

from bohmlib.analysis import VerificationSuite
from bohmlib.config import RunConfig


def _by_name(suite):
    return {check["name"]: check for check in suite.checks}


def test_closed_form_checks_pass():
    suite = VerificationSuite(RunConfig())
    suite.check_width_law()
    suite.check_residuals()
    suite.check_quantum_potential()
    suite.check_regimes()
    suite.check_asymptotic_convergence()
    suite.check_density_agreement()
    checks = _by_name(suite)
    for name in ("width_law_analytic", "width_law_numeric", "continuity_residual", "hj_residual",
                 "residual_order", "q_forms_t0", "q_forms_t5", "q_forms_t10", "q_gaussian_center",
                 "regime_early_control", "regime_monotone", "regime_t1", "regime_t3", "regime_t8",
                 "asymptotic_convergence", "density_agreement"):
        assert checks[name]["passed"], checks[name]
    assert not any(check["skipped"] for check in suite.checks)


def test_fringe_checks_pass():
    suite = VerificationSuite(RunConfig())
    suite.check_fringe_spacing()
    checks = _by_name(suite)
    assert set(checks) == {"fringe_spacing_t10", "fringe_spacing_t8", "fringe_spacing_t6", "fringe_law"}
    assert all(check["passed"] for check in suite.checks)


def test_single_packet_skips_fringe_checks():
    suite = VerificationSuite(RunConfig(d=0.0))
    suite.check_fringe_spacing()
    suite.check_regimes()
    suite.check_node_avoidance()
    assert [check["name"] for check in suite.checks] == ["fringe_spacing", "regimes", "node_avoidance"]
    assert all(check["passed"] and check["skipped"] for check in suite.checks)


def test_regime_pins_need_default_parameters():
    suite = VerificationSuite(RunConfig(d=8.0))
    suite.check_regimes()
    assert _by_name(suite)["regime_pins"]["skipped"]


def test_raising_group_is_recorded(monkeypatch):
    suite = VerificationSuite(RunConfig())
    for name in dir(suite):
        if name.startswith("check_"):
            monkeypatch.setattr(suite, name, lambda: None)

    def broken():
        raise RuntimeError("boom")
    monkeypatch.setattr(suite, "check_symmetry", broken)
    report = suite.run()
    assert not report["passed"]
    assert report["failures"] == ["symmetry"]
    assert report["checks"][0]["details"]["error"] == "RuntimeError: boom"
    assert report["config"] == RunConfig().to_dict()


@pytest.mark.slow
def test_default_configuration_passes():
    report = VerificationSuite(RunConfig()).run()
    assert report["passed"], report["failures"]


@pytest.mark.slow
def test_single_packet_configuration_passes():
    report = VerificationSuite(RunConfig(d=0.0)).run()
    assert report["passed"], report["failures"]


@pytest.mark.slow
def test_coarse_step_fails_harmonic_check():
    report = VerificationSuite(RunConfig(dt=0.5)).run()
    assert "harmonic_l2" in report["failures"]
