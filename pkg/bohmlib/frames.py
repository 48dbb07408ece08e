"""Frame Sources Module.

Sequences of wave samples and field frames for a run configuration, either
from the closed form or from the split-operator propagator. Sources are
generators, so a long run never holds more than one frame at a time.
"""
import logging

import numpy as np

from bohmlib.datasets.states import load_state, two_slit_state
from bohmlib.fields import field_frame
from bohmlib.propagator import PropagatorSpec, SplitOperator, emission_times
from bohmlib.trajectories import FrameVelocity

logger = logging.getLogger(__name__)


def analytic_samples(config, emit_every=None):
    """Closed-form two-packet samples at the emission times of ``config``.

    Parameters
    ----------
    config : bohmlib.config.RunConfig

    emit_every : integer, optional
        Frame cadence in steps of ``config.dt``; default ``config.emit_every``.

    Yields
    ------
    bohmlib.grid.WaveSample
    """
    emit_every = config.emit_every if emit_every is None else emit_every
    params, grid = config.params, config.grid
    for t in emission_times(0.0, config.t_final, config.dt, emit_every):
        yield two_slit_state(params, grid, t, raw=config.raw)


def initial_state(config):
    """The state a numeric run starts from: ``config.initial_state`` when set,
    otherwise the two-packet state at t = 0.

    Raises
    ------
    OSError
        If the initial-state file cannot be read.

    bohmlib.exceptions.GridMismatchError
        If its ``x`` column is not the configured grid.
    """
    if config.initial_state:
        return load_state(config.initial_state, config.grid)
    return two_slit_state(config.params, config.grid, 0.0)


def numeric_samples(config, emit_every=None, verbose=False):
    """Split-operator samples from ``initial_state(config)``, emitted with the
    same rule (and at the same times) as ``analytic_samples``."""
    emit_every = config.emit_every if emit_every is None else emit_every
    spec = PropagatorSpec(config.grid, config.dt, hbar=config.hbar, mass=config.mass)
    propagator = SplitOperator(spec, verbose=verbose)
    w0 = initial_state(config)
    yield from propagator.iter_evolve(w0, config.t_final, emit_every)


def samples(config, emit_every=None, verbose=False):
    """Samples from the source selected by ``config.mode``."""
    if config.mode == "numeric":
        return numeric_samples(config, emit_every, verbose)
    return analytic_samples(config, emit_every)


def to_frame(w, config):
    """Field frame of one sample with the node threshold and Q form of ``config``."""
    eps = config.node_eps * float(np.max(np.abs(w.values)**2))
    return field_frame(w, config.hbar, config.mass, eps=eps, q_form=config.q_form)


def frames(config, emit_every=None, verbose=False):
    """Field frames from the source selected by ``config.mode``."""
    for w in samples(config, emit_every, verbose):
        yield to_frame(w, config)


def frame_velocity(config, verbose=False):
    """Velocity provider over propagated frames stored every ``traj_dt``.

    Raises
    ------
    ValueError
        If ``traj_dt`` is not a multiple of ``dt``.
    """
    ratio = config.traj_dt / config.dt
    emit_every = int(round(ratio))
    if emit_every < 1 or abs(ratio - emit_every) > 1e-9:
        raise ValueError("Error when checking traj_dt: expected a multiple of dt={} but got {}".format(
            config.dt, config.traj_dt))
    provider = FrameVelocity(to_frame(w, config) for w in numeric_samples(config, emit_every, verbose))
    if verbose:
        logger.info("stored %d propagated frames for trajectory integration", len(provider.times))
    return provider
