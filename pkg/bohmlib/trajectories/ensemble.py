"""Ensemble Module.

Runs many trajectories that share their sampling provenance and their
integration settings, under the analytic scheme: the wavefunction (closed
form or propagated frames) exists first, trajectories are computed from it.
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from bohmlib import model
from bohmlib.exceptions import EnsembleAbortError
from bohmlib.model import TwoSlitParams
from bohmlib.trajectories.integrator import (AnalyticVelocity, FrameVelocity, RK4Integrator,
                                             Trajectory, fringe_guard)
from bohmlib.trajectories.sampler import default_support, sample_initial
from bohmlib.utils.io_utils import write_csv, write_json

logger = logging.getLogger(__name__)

ABORT_TOLERANCE = 0.01


@dataclass(eq=False)
class Ensemble:
    """Trajectories ordered by initial condition.

    Attributes
    ----------
    times : array, shape (n_times,)

    positions : array, shape (n_times, count)
        Column i is trajectory i.

    flags : array of bool, shape (n_times, count)

    sampler : bohmlib.trajectories.SamplerSpec

    provenance : dict
        Velocity provider descriptor, support, integration settings.

    diagnostics : dict of int -> str
        Aborted trajectories.
    """
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)
    flags: np.ndarray = field(repr=False)
    sampler: object = None
    provenance: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def count(self):
        return self.positions.shape[1]

    @property
    def initial_conditions(self):
        return self.positions[0]

    @property
    def trajectories(self):
        """One Trajectory per initial condition, in order."""
        return [Trajectory(times=self.times,
                           positions=self.positions[:, i],
                           initial_condition=float(self.positions[0, i]),
                           flags=self.flags[:, i],
                           aborted=i in self.diagnostics,
                           diagnostic=self.diagnostics.get(i))
                for i in range(self.count)]

    def time_index(self, t, atol=1e-12):
        """Index of the stored time equal to ``t``.

        Raises
        ------
        ValueError
            If ``t`` is not a stored time.
        """
        hits = np.flatnonzero(np.isclose(self.times, t, rtol=0, atol=atol))
        if hits.size == 0:
            raise ValueError("Error when checking time: t={} is not a stored time of the ensemble".format(t))
        return int(hits[0])

    def positions_at(self, t):
        """Positions of the trajectories that did not abort, at stored time t."""
        column = self.positions[self.time_index(t)]
        return column[np.isfinite(column)]

    def abort_report(self):
        aborted = len(self.diagnostics)
        return {"count": self.count,
                "aborted": aborted,
                "fraction": aborted / self.count,
                "diagnostics": {str(i): message for i, message in sorted(self.diagnostics.items())}}

    def to_csv(self, path, sidecar_path=None):
        """One row per (trajectory_id, t, x, flagged), plus a JSON sidecar
        with the sampler, the provenance and the abort report."""
        n_times, count = self.positions.shape
        write_csv(path, {"trajectory_id": np.repeat(np.arange(count), n_times),
                         "t": np.tile(self.times, count),
                         "x": self.positions.T.ravel(),
                         "flagged": self.flags.T.ravel().astype(int)})
        if sidecar_path is not None:
            write_json(sidecar_path, {"sampler": self.sampler.to_dict(),
                                      "provenance": self.provenance,
                                      "aborts": self.abort_report()})


def ensemble_run(source, sampler, t_grid, support=None, node_eps=1e-12, guard=None, verbose=False):
    """Sample initial conditions and integrate them over ``t_grid``.

    Parameters
    ----------
    source : bohmlib.model.TwoSlitParams or sequence of bohmlib.fields.FieldFrame
        Closed-form model, or propagator frames starting at ``t_grid[0]``.

    sampler : bohmlib.trajectories.SamplerSpec

    t_grid : array-like of float
        Stored times, strictly increasing; one RK4 step per interval.

    support : (float, float), optional
        Sampling interval; by default around both packets for a model
        source, the frame grid for frames.

    node_eps : float, default=1e-12
        Relative node threshold of the analytic velocity.

    guard : callable, optional
        Displacement bound; defaults to the fringe spacing of the model.
        Frame sources have none unless given.

    verbose : boolean, default=False

    Returns
    -------
    Ensemble

    Raises
    ------
    bohmlib.exceptions.EnsembleAbortError
        If more than 1% of the trajectories abort.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("Error when checking t_grid: expected strictly increasing times")
    if isinstance(source, TwoSlitParams):
        provider = AnalyticVelocity(source, node_eps)
        support = default_support(source) if support is None else support
        guard = fringe_guard(source) if guard is None else guard
        x0 = sample_initial(lambda x: model.rho_closed_form(source, x, t_grid[0]), sampler, support)
    else:
        provider = source if isinstance(source, FrameVelocity) else FrameVelocity(source)
        grid, rho0 = provider.grid, provider.initial_rho
        support = (grid.x_min, grid.x_max - grid.spacing) if support is None else support
        x0 = sample_initial(lambda x: np.interp(x, grid.points, rho0), sampler, support)
    integrator = RK4Integrator(guard=guard, verbose=verbose)
    start_time = time.time()
    positions, flags, diagnostics = integrator.run(x0, provider, t_grid)
    run_time = time.time() - start_time
    ensemble = Ensemble(times=t_grid,
                        positions=positions,
                        flags=flags,
                        sampler=sampler,
                        provenance={"velocity": provider.describe(),
                                    "support": [float(support[0]), float(support[1])],
                                    "t_first": float(t_grid[0]),
                                    "t_last": float(t_grid[-1]),
                                    "stored_times": int(t_grid.size),
                                    "max_halvings": integrator.max_halvings,
                                    "refinements": integrator.history["refinements"],
                                    "flagged_steps": integrator.history["flagged"]},
                        diagnostics=diagnostics)
    if verbose:
        logger.info("ensemble of %d integrated in %.2fs", sampler.count, run_time)
    report = ensemble.abort_report()
    if report["fraction"] > ABORT_TOLERANCE:
        raise EnsembleAbortError(report)
    return ensemble
