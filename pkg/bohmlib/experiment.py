"""Experiment Module.

High-level runs behind the command line. Each command takes a validated
``RunConfig``, writes its files into ``config.out`` and returns what it
wrote (a manifest, an ensemble or a report).
"""
import logging
import os
import time

from bohmlib.analysis.suite import VerificationSuite
from bohmlib.datasets.states import two_slit_state
from bohmlib.frames import frame_velocity, samples, to_frame
from bohmlib.metrics import l2_distance
from bohmlib.propagator import time_grid
from bohmlib.trajectories import SamplerSpec, default_support, ensemble_run, fringe_guard
from bohmlib.utils.io_utils import write_json

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"
ENSEMBLE_CSV = "ensemble.csv"
ENSEMBLE_SIDECAR = "ensemble.json"
REPORT = "report.json"


def frame_filename(t):
    """``fields_t<t>.csv``, e.g. ``fields_t10.csv``."""
    return "fields_t{:.10g}.csv".format(t)


def _output_dir(config):
    os.makedirs(config.out, exist_ok=True)
    return config.out


def cmd_fields(config, verbose=False):
    """Write one field frame per emitted time and a manifest.

    In numeric mode each propagated sample of the two-packet state is also
    compared with the closed form and the manifest records the L2 gaps and
    their maximum. A state loaded from ``config.initial_state`` has no
    closed form to compare with.

    Parameters
    ----------
    config : bohmlib.config.RunConfig

    verbose : boolean, default=False

    Returns
    -------
    dict
        The manifest: ``config`` (every field, defaults included), ``mode``,
        ``times``, ``files``, ``columns`` and, when compared, ``l2_gaps``
        and ``max_l2_gap``.

    Raises
    ------
    OSError
        If the output directory or a file cannot be written.
    """
    out = _output_dir(config)
    start_time = time.time()
    manifest = {"config": config.to_dict(), "mode": config.mode, "times": [], "files": [], "columns": []}
    gaps = []
    compare = config.mode == "numeric" and not config.initial_state
    for w in samples(config, verbose=verbose):
        frame = to_frame(w, config)
        name = frame_filename(w.t)
        frame.to_csv(os.path.join(out, name), config.params)
        manifest["times"].append(float(w.t))
        manifest["files"].append(name)
        manifest["columns"] = list(frame.columns())
        if compare:
            exact = two_slit_state(config.params, config.grid, w.t)
            gaps.append(l2_distance(w.values, exact.values, config.grid.spacing))
        if verbose:
            logger.info("wrote %s", name)
    if compare:
        manifest["l2_gaps"] = gaps
        manifest["max_l2_gap"] = max(gaps)
    write_json(os.path.join(out, MANIFEST), manifest)
    logger.info("%d frames written to %s in %.2fs", len(manifest["files"]), out, time.time() - start_time)
    return manifest


def cmd_trajectories(config, verbose=False):
    """Integrate the configured ensemble and write ``ensemble.csv`` with its
    JSON sidecar.

    Returns
    -------
    bohmlib.trajectories.Ensemble

    Raises
    ------
    bohmlib.exceptions.EnsembleAbortError
        If more than 1% of the trajectories abort; nothing is written.
    """
    out = _output_dir(config)
    params = config.params
    t_grid = time_grid(0.0, config.t_final, config.traj_dt)
    sampler = SamplerSpec(config.count, config.sampler_mode, config.seed, config.stratified)
    if config.mode == "numeric" and config.initial_state:
        ensemble = ensemble_run(frame_velocity(config, verbose), sampler, t_grid, verbose=verbose)
    elif config.mode == "numeric":
        ensemble = ensemble_run(frame_velocity(config, verbose), sampler, t_grid,
                                support=default_support(params), guard=fringe_guard(params), verbose=verbose)
    else:
        ensemble = ensemble_run(params, sampler, t_grid, node_eps=config.node_eps, verbose=verbose)
    ensemble.provenance["config"] = config.to_dict()
    ensemble.to_csv(os.path.join(out, ENSEMBLE_CSV), os.path.join(out, ENSEMBLE_SIDECAR))
    logger.info("%d trajectories over %d stored times written to %s", ensemble.count, t_grid.size, out)
    return ensemble


def cmd_verify(config, verbose=False):
    """Run the verification suite and write ``report.json``.

    Returns
    -------
    dict
        The report; ``report["passed"]`` is False when any check failed.
    """
    out = _output_dir(config)
    report = VerificationSuite(config, verbose).run()
    write_json(os.path.join(out, REPORT), report)
    if report["passed"]:
        logger.info("all %d checks passed in %.1fs", len(report["checks"]), report["run_time"])
    else:
        logger.warning("%d check(s) failed: %s", len(report["failures"]), ", ".join(report["failures"]))
    return report
