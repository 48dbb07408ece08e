"""Integrator Module.

Bohmian trajectories follow the guidance law ::

        dx/dt = v(x, t) = J(x, t) / rho(x, t)

integrated with the classical fourth-order Runge-Kutta method. A proposed
step is retried as two half steps (recursively, down to dt/64) whenever the
displacement exceeds the guard length, usually one fringe width, or a
velocity query lands on a masked node. Retried steps are flagged.
"""
import functools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from bohmlib import model
from bohmlib.propagator.utils import time_grid

logger = logging.getLogger(__name__)

# query times this close to the stored range are clamped into it
TIME_TOLERANCE = 1e-9


class VelocityProvider(object):
    """Base class for the velocity fields trajectories are integrated through.

    Warning: This class should not be used directly.
    Use derived classes instead.

    Instances are called as ``provider(x, t)`` with an array of positions
    and a scalar time, and return ``(v, masked)``: the velocity at each
    position and a boolean array, True where the query fell on a node.
    Providers are read-only once built.
    """
    def __call__(self, x, t):
        raise NotImplementedError

    def describe(self):
        """Provenance descriptor (a JSON-serializable dict)."""
        raise NotImplementedError


class AnalyticVelocity(VelocityProvider):
    """Velocity of the closed-form two-packet state, evaluated at the exact
    query point.

    Parameters
    ----------
    params : bohmlib.model.TwoSlitParams

    node_eps : float, default=1e-12
        A query is masked where rho is below ``node_eps`` times the peak
        density of a single packet at that time.
    """
    def __init__(self, params, node_eps=1e-12):
        self.params = params
        self.node_eps = node_eps

    def __call__(self, x, t):
        p = self.params
        v = model.velocity_closed_form(p, x, t)
        masked = model.rho_closed_form(p, x, t) < self.node_eps * model.packet_peak(p, t)
        return v, masked

    def describe(self):
        return {"provider": "analytic", "params": self.params.to_dict(), "node_eps": self.node_eps}


class FrameVelocity(VelocityProvider):
    """Velocity interpolated from stored field frames: cubic spline in x
    within a frame, linear in t between adjacent frames.

    Parameters
    ----------
    frames : iterable of bohmlib.fields.FieldFrame
        Frames on one grid, in increasing time. Only the velocity and the
        node mask of each frame are kept, plus the density of the first one.
        A single frame only answers queries at its own time.

    Notes
    -----
    A query is masked when the grid point nearest to it is masked in either
    bracketing frame. Times outside the stored range (beyond a relative
    ``TIME_TOLERANCE``) give NaN velocities.
    """
    def __init__(self, frames):
        self.grid = None
        self.initial_rho = None
        times, self._v, self._masks = [], [], []
        for frame in frames:
            if self.grid is None:
                self.grid, self.initial_rho = frame.grid, frame.rho
            else:
                self.grid.check_same(frame.grid)
            times.append(frame.t)
            self._v.append(frame.v)
            self._masks.append(frame.node_mask)
        if not times:
            raise ValueError("Error when checking frames: expected at least 1 but got 0")
        self.times = np.array(times, dtype=float)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("Error when checking frames: times must be strictly increasing")
        self._spline = functools.lru_cache(maxsize=8)(self._build_spline)

    def _build_spline(self, index):
        return CubicSpline(self.grid.points, self._v[index])

    def __call__(self, x, t):
        x = np.asarray(x, dtype=float)
        tol = TIME_TOLERANCE * max(1.0, abs(self.times[-1]))
        if not self.times[0] - tol <= t <= self.times[-1] + tol:
            return np.full(x.shape, np.nan), np.zeros(x.shape, dtype=bool)
        nearest = np.clip(np.rint((x - self.grid.x_min) / self.grid.spacing), 0, self.grid.n - 1).astype(int)
        if self.times.size == 1:
            return self._spline(0)(x), self._masks[0][nearest]
        t = min(max(t, self.times[0]), self.times[-1])
        i = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 2))
        alpha = (t - self.times[i]) / (self.times[i + 1] - self.times[i])
        v = (1 - alpha) * self._spline(i)(x) + alpha * self._spline(i + 1)(x)
        masked = self._masks[i][nearest] | self._masks[i + 1][nearest]
        return v, masked

    def describe(self):
        return {"provider": "frames", "grid": [self.grid.x_min, self.grid.x_max, self.grid.n],
                "t_first": float(self.times[0]), "t_last": float(self.times[-1]), "frames": len(self.times)}


def _query(provider, x, t):
    """``(v, masked)`` from a provider; a bare velocity result is unmasked."""
    result = provider(x, t)
    if isinstance(result, tuple):
        return result
    v = np.broadcast_to(np.asarray(result, dtype=float), np.shape(x))
    return v, np.zeros(np.shape(x), dtype=bool)


def fringe_guard(params):
    """Displacement bound: the fringe spacing at the end of the step, or the
    packet width when ``d = 0``."""
    if params.d == 0:
        return lambda t: model.sigma_abs(params, t)
    return lambda t: model.fringe_spacing(params, t)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Positions of one Bohmian trajectory.

    Attributes
    ----------
    times : array
        Strictly increasing stored times.
    positions : array
        Position at each stored time (NaN after an abort).
    initial_condition : float
    flags : array of bool
        ``flags[j]`` is True when the step ending at ``times[j]`` was
        refined or used a masked velocity; ``flags[0]`` is always False.
    aborted : boolean
    diagnostic : string or None
    """
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)
    initial_condition: float = 0.0
    flags: np.ndarray = field(default=None, repr=False)
    aborted: bool = False
    diagnostic: str = None

    @property
    def terminal(self):
        return float(self.positions[-1])

    @property
    def flagged_steps(self):
        return int(np.count_nonzero(self.flags))


class RK4Integrator(object):
    """Vectorized RK4 over many initial conditions with step refinement.

    Parameters
    ----------
    max_halvings : integer, default=6
        Deepest refinement; the smallest step is ``h / 2**max_halvings``.

    guard : callable, optional
        ``t -> length`` bounding the displacement of one step ending at t.
        No bound when omitted.

    verbose : boolean, default=False
        Whether to log progress messages.

    Attributes
    ----------
    history : dict
        ``refinements`` (number of retried steps) and ``flagged`` (number
        of flagged trajectory steps) of the last run.
    """
    def __init__(self, max_halvings=6, guard=None, verbose=False):
        self.max_halvings = max_halvings
        self.guard = guard
        self.verbose = verbose
        self.history = {"refinements": 0, "flagged": 0}
        self._params = {"method": "rk4",
                        "max_halvings": max_halvings,
                        "guard": guard is not None}

    def get_params(self):
        """Returns the parameters of the integrator."""
        return dict(self._params)

    def _rk4(self, provider, x, t, h):
        k1, m1 = _query(provider, x, t)
        k2, m2 = _query(provider, x + 0.5 * h * k1, t + 0.5 * h)
        k3, m3 = _query(provider, x + 0.5 * h * k2, t + 0.5 * h)
        k4, m4 = _query(provider, x + h * k3, t + h)
        return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), m1 | m2 | m3 | m4

    def _advance(self, provider, x, t, h, depth=0):
        x_new, masked = self._rk4(provider, x, t, h)
        finite = np.isfinite(x_new)
        reject = masked | ~finite
        if self.guard is not None:
            with np.errstate(invalid="ignore"):
                reject |= np.abs(x_new - x) > self.guard(t + h)
        flagged = reject.copy()
        if not reject.any() or depth == self.max_halvings:
            return x_new, flagged, ~finite
        self.history["refinements"] += int(np.count_nonzero(reject))
        x_half, _, failed_a = self._advance(provider, x[reject], t, 0.5 * h, depth + 1)
        x_end, _, failed_b = self._advance(provider, x_half, t + 0.5 * h, 0.5 * h, depth + 1)
        x_new[reject] = x_end
        failed = ~finite
        failed[reject] = failed_a | failed_b
        return x_new, flagged, failed

    def run(self, x0, provider, times):
        """Integrate every initial condition over the stored times.

        Parameters
        ----------
        x0 : array-like of float, shape (count,)

        provider : VelocityProvider or callable

        times : array-like of float
            Strictly increasing; one RK4 step (before refinement) per
            interval.

        Returns
        -------
        positions : array, shape (len(times), count)

        flags : array of bool, shape (len(times), count)

        diagnostics : dict of int -> str
            Index of each aborted trajectory and the reason.
        """
        times = np.asarray(times, dtype=float)
        x0 = np.atleast_1d(np.asarray(x0, dtype=float))
        positions = np.full((times.size, x0.size), np.nan)
        flags = np.zeros((times.size, x0.size), dtype=bool)
        positions[0] = x0
        alive = np.isfinite(x0)
        diagnostics = {int(i): "non-finite initial condition" for i in np.flatnonzero(~alive)}
        self.history = {"refinements": 0, "flagged": 0}
        for j in range(1, times.size):
            t, h = times[j - 1], times[j] - times[j - 1]
            index = np.flatnonzero(alive)
            if index.size == 0:
                break
            x_new, flagged, failed = self._advance(provider, positions[j - 1, index], t, h)
            positions[j, index] = np.where(failed, np.nan, x_new)
            flags[j, index] = flagged
            for i in index[failed]:
                diagnostics[int(i)] = "non-finite velocity at t={:.6g} from x={!r} after {} halvings".format(
                    t, float(positions[j - 1, i]), self.max_halvings)
                logger.warning("trajectory %d aborted: %s", i, diagnostics[int(i)])
            alive[index[failed]] = False
            if self.verbose and j % max(1, (times.size - 1) // 10) == 0:
                logger.info("t: %.6g - alive: %d/%d - flagged steps: %d",
                            times[j], np.count_nonzero(alive), x0.size, np.count_nonzero(flags[:j + 1]))
        self.history["flagged"] = int(np.count_nonzero(flags))
        if self.history["flagged"]:
            logger.warning("%d trajectory steps were refined or crossed a masked node", self.history["flagged"])
        return positions, flags, diagnostics


def integrate(x0, velocity_provider, t0, t1, dt, guard=None, max_halvings=6):
    """Integrate one trajectory from ``x0`` at ``t0`` to ``t1``.

    Parameters
    ----------
    x0 : float

    velocity_provider : VelocityProvider or callable
        ``(x, t) -> (v, masked)``, or ``(x, t) -> v`` for a field without
        nodes.

    t0, t1 : float
        t1 >= t0.

    dt : float
        Nominal step; the last one is shortened to land on t1.

    guard : callable, optional
        See ``RK4Integrator``.

    Returns
    -------
    Trajectory
    """
    times = time_grid(t0, t1, dt)
    positions, flags, diagnostics = RK4Integrator(max_halvings, guard).run([x0], velocity_provider, times)
    return Trajectory(times=times,
                      positions=positions[:, 0],
                      initial_condition=float(x0),
                      flags=flags[:, 0],
                      aborted=0 in diagnostics,
                      diagnostic=diagnostics.get(0))
