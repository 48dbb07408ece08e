"""Verification Suite Module.

Acceptance checks of a run configuration. Every check records its name,
whether it passed or was skipped, and the numbers behind the verdict; the
suite passes when no check failed. Two-packet checks are skipped for
``d = 0`` and the regime pins only hold for the default parameter set.
The checks always start from the normalized two-packet state, whatever
``raw`` and ``initial_state`` say.
"""
import logging
import math
import time
from dataclasses import replace

import numpy as np

from bohmlib import model
from bohmlib.analysis.analysis import (DEFAULT_REGIME_THRESHOLDS, REGIMES, asymptotic_convergence,
                                       classify_regime, crossing_violations, equivariance_test, fringe_law,
                                       measure_fringe_spacing, mirror_defect, node_avoidance, residual_summary)
from bohmlib.datasets.states import coherent_state, gaussian_state, harmonic_potential, two_slit_state
from bohmlib.exceptions import NotFringedError
from bohmlib.fields import current_density, quantum_potential
from bohmlib.frames import frame_velocity, to_frame
from bohmlib.grid import GridSpec
from bohmlib.metrics import l2_distance, max_relative_error, phase_aligned_l2_distance
from bohmlib.model import TwoSlitParams
from bohmlib.propagator import (PropagatorSpec, SplitOperator, emission_times, mean_momentum, order_of_accuracy,
                                time_grid, width)
from bohmlib.trajectories import SamplerSpec, default_support, ensemble_run, fringe_guard

logger = logging.getLogger(__name__)

FRINGE_CHECKS = ((10.0, 0.01), (8.0, 0.02), (6.0, 0.02))
FRINGE_LAW_TOLERANCE = 0.02
WIDTH_TOLERANCE = {"analytic": 1e-12, "numeric": 1e-8}
L2_TOLERANCE = 1e-6
NORM_TOLERANCE = 1e-9
MOMENTUM_TOLERANCE = 1e-12
REVERSAL_STEPS = 1000
REVERSAL_TOLERANCE = 1e-8
HARMONIC_GRID = (-16.0, 16.0, 256)
HARMONIC_TIME = 1.0
HARMONIC_TOLERANCE = 1e-5
ORDER_DTS = (0.04, 0.02, 0.01)
ORDER_RANGE = (1.8, 2.2)
EQUIVARIANCE_COUNT = 2000
SCALING_COUNTS = (250, 1000, 4000)
SCALING_NOISE = 0.10
CROSSING_TOLERANCE = 1e-10
MIRROR_TOLERANCE = 1e-8
RESIDUAL_TIME = 5.0
RESIDUAL_DELTA = 1e-4
RESIDUAL_BOUNDS = {"continuity": 1e-5, "hj": 1e-4}
PROPAGATED_FACTOR = 10
ORDER_DELTAS = (0.04, 0.02)
DELTA_ORDER_RANGE = (1.5, 2.5)
Q_TIMES = (0.0, 5.0, 10.0)
Q_TOLERANCE = 1e-8
Q_MASK = 1e-3
SYMMETRY_TOLERANCE = 1e-10
REGIME_PINS = ((1.0, REGIMES[0]), (3.0, REGIMES[1]), (8.0, REGIMES[2]))
ASYMPTOTIC_TIMES = (2.5, 5.0, 10.0)
DENSITY_TIMES = (0.0, 1.0, 5.0, 10.0)
DENSITY_TOLERANCE = 1e-12


class VerificationSuite(object):
    """Runs every acceptance check on one configuration.

    Parameters
    ----------
    config : bohmlib.config.RunConfig

    verbose : boolean, default=False
        Whether to log each verdict and the progress of long checks.

    Attributes
    ----------
    checks : list of dict
        One entry per check of the last run, with the keys ``name``,
        ``passed``, ``skipped`` and ``details``.
    """
    def __init__(self, config, verbose=False):
        self.config = config
        # checks compare with the normalized closed form
        self._reference = replace(config, raw=False, initial_state="")
        self.verbose = verbose
        self.params = config.params
        self.grid = config.grid
        self.checks = []
        self._frames = {}
        self._ensemble = None

    def run(self):
        """Run all checks.

        Returns
        -------
        dict
            ``config``, ``checks``, ``passed`` (True when no check failed),
            ``failures`` (names of the failed checks) and ``run_time``.
        """
        self.checks = []
        start_time = time.time()
        groups = [("fringe_spacing", self.check_fringe_spacing),
                  ("width_law", self.check_width_law),
                  ("numeric_vs_analytic", self.check_numeric_vs_analytic),
                  ("equivariance", self.check_equivariance),
                  ("non_crossing", self.check_non_crossing),
                  ("residuals", self.check_residuals),
                  ("quantum_potential", self.check_quantum_potential),
                  ("symmetry", self.check_symmetry),
                  ("regimes", self.check_regimes),
                  ("asymptotic_convergence", self.check_asymptotic_convergence),
                  ("density_agreement", self.check_density_agreement),
                  ("node_avoidance", self.check_node_avoidance)]
        for name, check in groups:
            try:
                check()
            except Exception as e:
                logger.error("check group %s raised %s: %s", name, type(e).__name__, e, exc_info=self.verbose)
                self._record(name, False, error="{}: {}".format(type(e).__name__, e))
        failures = [check["name"] for check in self.checks if not check["passed"]]
        return {"config": self.config.to_dict(),
                "checks": self.checks,
                "passed": not failures,
                "failures": failures,
                "run_time": time.time() - start_time}

    def _record(self, name, passed, skipped=False, **details):
        passed = bool(passed)
        self.checks.append({"name": name, "passed": passed, "skipped": skipped, "details": details})
        if not passed:
            logger.warning("FAIL %s %s", name, details)
        elif self.verbose:
            logger.info("%s %s", "skip" if skipped else "pass", name)

    def _skip(self, name, reason):
        self._record(name, True, skipped=True, reason=reason)

    def _frame(self, t):
        """Closed-form field frame on the configured grid (cached)."""
        if t not in self._frames:
            self._frames[t] = to_frame(two_slit_state(self.params, self.grid, t), self.config)
        return self._frames[t]

    def _propagator(self, grid=None, dt=None, potential=None):
        spec = PropagatorSpec(self.grid if grid is None else grid,
                              self.config.dt if dt is None else dt,
                              potential,
                              hbar=self.params.hbar,
                              mass=self.params.mass)
        return SplitOperator(spec, verbose=self.verbose)

    def _rho_at(self, t):
        return lambda x: model.rho_closed_form(self.params, x, t)

    def ensemble(self):
        """The quantile ensemble of ``EQUIVARIANCE_COUNT`` trajectories to
        ``t_final``, through propagated frames in numeric mode."""
        if self._ensemble is None:
            config = self.config
            t_grid = time_grid(0.0, config.t_final, config.traj_dt)
            sampler = SamplerSpec(EQUIVARIANCE_COUNT)
            if config.mode == "numeric":
                self._ensemble = ensemble_run(frame_velocity(self._reference, self.verbose), sampler, t_grid,
                                              support=default_support(self.params),
                                              guard=fringe_guard(self.params),
                                              verbose=self.verbose)
            else:
                self._ensemble = ensemble_run(self.params, sampler, t_grid,
                                              node_eps=config.node_eps, verbose=self.verbose)
        return self._ensemble

    def check_fringe_spacing(self):
        if self.params.d == 0:
            self._skip("fringe_spacing", "a single packet has no fringes")
            return
        for t, tolerance in FRINGE_CHECKS:
            measured = measure_fringe_spacing(self._frame(t))
            predicted = model.fringe_spacing(self.params, t)
            deviation = abs(measured / predicted - 1)
            self._record("fringe_spacing_t{:g}".format(t), deviation < tolerance,
                         measured=measured, predicted=predicted,
                         relative_deviation=deviation, tolerance=tolerance)
        law = fringe_law(self.params, [self._frame(t) for t, _ in sorted(FRINGE_CHECKS)])
        self._record("fringe_law", law["relative_deviation"] < FRINGE_LAW_TOLERANCE,
                     tolerance=FRINGE_LAW_TOLERANCE, **law)

    def check_width_law(self):
        t = model.tau(self.params)
        expected = math.sqrt(2) * self.params.sigma0
        analytic = model.sigma_abs(self.params, t)
        self._record("width_law_analytic", abs(analytic / expected - 1) < WIDTH_TOLERANCE["analytic"],
                     t=t, expected=expected, value=analytic, tolerance=WIDTH_TOLERANCE["analytic"])
        propagated = self._propagator().advance(gaussian_state(self.params, self.grid), t)
        numeric = width(propagated)
        self._record("width_law_numeric", abs(numeric / expected - 1) < WIDTH_TOLERANCE["numeric"],
                     t=t, expected=expected, value=numeric, tolerance=WIDTH_TOLERANCE["numeric"])

    def check_numeric_vs_analytic(self):
        config, grid = self.config, self.grid
        propagator = self._propagator()
        w0 = two_slit_state(self.params, grid, 0.0)
        final = propagator.advance(w0, config.t_final)
        exact = two_slit_state(self.params, grid, config.t_final)
        gap = l2_distance(final.values, exact.values, grid.spacing)
        self._record("two_slit_l2", gap < L2_TOLERANCE, t=config.t_final, dt=config.dt,
                     l2=gap, tolerance=L2_TOLERANCE)
        drift = abs(final.norm - w0.norm)
        self._record("norm_conservation", drift < NORM_TOLERANCE, drift=drift, tolerance=NORM_TOLERANCE)
        shift = abs(mean_momentum(final, self.params.hbar) - mean_momentum(w0, self.params.hbar))
        self._record("momentum_conservation", shift < MOMENTUM_TOLERANCE, shift=shift, tolerance=MOMENTUM_TOLERANCE)

        forward = w0
        for _ in range(REVERSAL_STEPS):
            forward = propagator.step(forward)
        back = propagator.run_backward(forward, REVERSAL_STEPS)
        reversal = l2_distance(back.values, w0.values, grid.spacing)
        self._record("time_reversal", reversal < REVERSAL_TOLERANCE, steps=REVERSAL_STEPS,
                     l2=reversal, tolerance=REVERSAL_TOLERANCE)

        a = propagator.advance(w0, RESIDUAL_TIME)
        b = propagator.step(a, RESIDUAL_DELTA)
        summary = residual_summary([to_frame(a, config), to_frame(b, config)])
        bounds = {key: PROPAGATED_FACTOR * value for key, value in RESIDUAL_BOUNDS.items()}
        self._record("propagated_residuals",
                     summary["continuity_max"] < bounds["continuity"] and summary["hj_max"] < bounds["hj"],
                     continuity=summary["continuity_max"], hj=summary["hj_max"], bounds=bounds)

        harmonic = GridSpec(*HARMONIC_GRID)
        oscillator = self._propagator(harmonic, potential=harmonic_potential(harmonic, mass=self.params.mass))
        x0 = 2.0
        start = coherent_state(harmonic, 0.0, x0=x0, hbar=self.params.hbar, mass=self.params.mass)
        target = coherent_state(harmonic, HARMONIC_TIME, x0=x0, hbar=self.params.hbar, mass=self.params.mass)
        error = phase_aligned_l2_distance(oscillator.advance(start, HARMONIC_TIME).values, target.values,
                                          harmonic.spacing)
        self._record("harmonic_l2", error < HARMONIC_TOLERANCE, t=HARMONIC_TIME, dt=config.dt,
                     l2=error, tolerance=HARMONIC_TOLERANCE)
        measured = order_of_accuracy(ORDER_DTS, HARMONIC_TIME, x0=x0, hbar=self.params.hbar, mass=self.params.mass)
        low, high = ORDER_RANGE
        self._record("order_of_accuracy", low <= measured["order"] <= high, range=list(ORDER_RANGE), **measured)

    def check_equivariance(self):
        config = self.config
        t = config.t_final
        rho_t = self._rho_at(t)
        ensemble = self.ensemble()
        report = equivariance_test(ensemble, rho_t, t)
        self._record("equivariance", report.passed, **report.to_dict())

        shift = 1.0 if self.params.d > 0 else model.sigma_abs(self.params, t)
        shifted = replace(ensemble, positions=ensemble.positions + shift)
        control = equivariance_test(shifted, rho_t, t, threshold=report.threshold)
        self._record("equivariance_negative_control", not control.passed, shift=shift, **control.to_dict())

        t_grid = time_grid(0.0, t, config.traj_dt)
        statistics, initial = [], None
        for count in SCALING_COUNTS:
            sampled = ensemble_run(self.params, SamplerSpec(count), t_grid, node_eps=config.node_eps)
            statistics.append(equivariance_test(sampled, rho_t, t).ks_statistic)
            if initial is None:
                initial = equivariance_test(sampled, self._rho_at(0.0), 0.0)
        monotone = all(b <= (1 + SCALING_NOISE) * a for a, b in zip(statistics, statistics[1:]))
        self._record("equivariance_scaling", monotone, counts=list(SCALING_COUNTS),
                     ks_statistics=statistics, noise=SCALING_NOISE)
        bound = 1 / (2 * initial.sample_size)
        self._record("equivariance_initial", initial.ks_statistic <= bound + 1e-9,
                     ks_statistic=initial.ks_statistic, bound=bound)

    def check_non_crossing(self):
        ensemble = self.ensemble()
        violations = crossing_violations(ensemble, CROSSING_TOLERANCE)
        self._record("non_crossing", violations == 0, violations=violations, count=ensemble.count,
                     stored_times=int(ensemble.times.size), tolerance=CROSSING_TOLERANCE)

    def check_residuals(self):
        frame_a = self._frame(RESIDUAL_TIME)
        frame_b = to_frame(two_slit_state(self.params, self.grid, RESIDUAL_TIME + RESIDUAL_DELTA), self.config)
        summary = residual_summary([frame_a, frame_b])
        self._record("continuity_residual", summary["continuity_max"] < RESIDUAL_BOUNDS["continuity"],
                     t=RESIDUAL_TIME, delta=RESIDUAL_DELTA, max_norm=summary["continuity_max"],
                     bound=RESIDUAL_BOUNDS["continuity"])
        self._record("hj_residual", summary["hj_max"] < RESIDUAL_BOUNDS["hj"],
                     t=RESIDUAL_TIME, delta=RESIDUAL_DELTA, max_norm=summary["hj_max"],
                     bound=RESIDUAL_BOUNDS["hj"])

        norms = []
        for delta in ORDER_DELTAS:
            later = to_frame(two_slit_state(self.params, self.grid, RESIDUAL_TIME + delta), self.config)
            norms.append(residual_summary([frame_a, later]))
        ratio = ORDER_DELTAS[0] / ORDER_DELTAS[1]
        orders = {key: math.log(norms[0][key + "_max"] / norms[1][key + "_max"]) / math.log(ratio)
                  for key in ("continuity", "hj")}
        low, high = DELTA_ORDER_RANGE
        self._record("residual_order", all(low <= order <= high for order in orders.values()),
                     deltas=list(ORDER_DELTAS), range=list(DELTA_ORDER_RANGE), **orders)

    def check_quantum_potential(self):
        hbar, mass = self.params.hbar, self.params.mass
        for t in Q_TIMES:
            w = two_slit_state(self.params, self.grid, t)
            rho = np.abs(w.values)**2
            eps = Q_MASK * float(rho.max())
            density_form = quantum_potential(w, "density", hbar, mass, eps=eps)
            dynamical_form = quantum_potential(w, "dynamical", hbar, mass, eps=eps)
            gap = float(np.max(np.abs(density_form - dynamical_form)[rho >= eps]))
            self._record("q_forms_t{:g}".format(t), gap < Q_TOLERANCE, max_difference=gap,
                         mask=Q_MASK, tolerance=Q_TOLERANCE)
        w = gaussian_state(self.params, self.grid)
        center = quantum_potential(w, "density", hbar, mass)[self.grid.index_nearest(0.0)]
        expected = hbar**2 / (4 * mass * self.params.sigma0**2)
        self._record("q_gaussian_center", abs(center - expected) < Q_TOLERANCE,
                     value=float(center), expected=expected, tolerance=Q_TOLERANCE)

    def check_symmetry(self):
        ensemble = self.ensemble()
        defect = mirror_defect(ensemble)
        self._record("ensemble_mirror", defect < MIRROR_TOLERANCE, defect=defect, tolerance=MIRROR_TOLERANCE)

        times = emission_times(0.0, self.config.t_final, self.config.dt, self.config.emit_every)
        origin = max(abs(float(model.velocity_closed_form(self.params, 0.0, t))) for t in times)
        half = max(abs(self.grid.x_min), abs(self.grid.x_max))
        grid = GridSpec(-half, half, self.grid.n)
        mirror = (-np.arange(grid.n)) % grid.n
        odd = 0.0
        for t in times:
            J = current_density(two_slit_state(self.params, grid, t), self.params.hbar, self.params.mass)
            odd = max(odd, float(np.max(np.abs(J + J[mirror]))))
            origin = max(origin, abs(float(J[grid.index_nearest(0.0)])))
        self._record("velocity_origin", origin < SYMMETRY_TOLERANCE, max_abs=origin, tolerance=SYMMETRY_TOLERANCE)
        self._record("flux_odd", odd < SYMMETRY_TOLERANCE, max_abs=odd, tolerance=SYMMETRY_TOLERANCE)

    def check_regimes(self):
        if self.params.d == 0:
            self._skip("regimes", "a single packet has no interference regimes")
            return
        thresholds = (self.config.regime_low, self.config.regime_high)
        t = 0.5 * model.tau(self.params)
        early = classify_regime(self.params, self._frame(t), thresholds)
        self._record("regime_early_control", early.regime != REGIMES[2], **early.to_dict())

        reports = [classify_regime(self.params, self._frame(float(t)), thresholds)
                   for t in range(1, int(self.config.t_final) + 1)]
        ranks = [REGIMES.index(report.regime) for report in reports]
        self._record("regime_monotone", all(a <= b for a, b in zip(ranks, ranks[1:])),
                     times=[report.t for report in reports], regimes=[report.regime for report in reports])

        if self.params != TwoSlitParams.defaults() or thresholds != DEFAULT_REGIME_THRESHOLDS:
            self._skip("regime_pins", "pinned times hold for the default parameters and thresholds only")
            return
        for t, expected in REGIME_PINS:
            report = classify_regime(self.params, self._frame(t), thresholds)
            self._record("regime_t{:g}".format(t), report.regime == expected, expected=expected,
                         **report.to_dict())

    def check_asymptotic_convergence(self):
        gaps = asymptotic_convergence(self.params, ASYMPTOTIC_TIMES, self.grid.points)
        self._record("asymptotic_convergence", all(b < a for a, b in zip(gaps, gaps[1:])),
                     times=list(ASYMPTOTIC_TIMES), gaps=gaps)

    def check_density_agreement(self):
        x = np.linspace(-40.0, 40.0, 8001)
        errors = [max_relative_error(np.abs(model.psi(self.params, x, t))**2, model.rho_closed_form(self.params, x, t))
                  for t in DENSITY_TIMES]
        self._record("density_agreement", max(errors) < DENSITY_TOLERANCE, times=list(DENSITY_TIMES),
                     errors=errors, tolerance=DENSITY_TOLERANCE)

    def check_node_avoidance(self):
        if self.params.d == 0:
            self._skip("node_avoidance", "a single packet has no nodes")
            return
        t = self.config.t_final
        if not t > 0:
            self._skip("node_avoidance", "no fringes at t = 0")
            return
        try:
            result = node_avoidance(self.ensemble(), self._frame(t))
        except NotFringedError as e:
            self._skip("node_avoidance", str(e))
            return
        self._record("node_avoidance", result["pass"], **result)
