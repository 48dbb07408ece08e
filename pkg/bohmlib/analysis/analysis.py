"""Analysis Module.

Statistical and structural checks of fields and ensembles: equivariance of
trajectory endpoints, fringe measurement, regime classification and
summaries of the field-equation residuals.
"""
import logging
import math
from dataclasses import dataclass, asdict

import numpy as np
from scipy.stats import kstest, linregress

from bohmlib import model
from bohmlib.exceptions import NotFringedError
from bohmlib.fields import continuity_residual, hj_residual
from bohmlib.trajectories.sampler import TabulatedCDF

logger = logging.getLogger(__name__)

REGIMES = ("huygens-ehrenfest-fresnel", "transition", "fraunhofer")
DEFAULT_REGIME_THRESHOLDS = (0.01, 0.9)
MAXIMA_FLOOR = 1e-3
CENTRAL_FRINGES = 5


@dataclass(frozen=True)
class EquivarianceReport:
    """Kolmogorov-Smirnov comparison of endpoint positions with a density.

    ``passed`` is True if and only if ``ks_statistic < threshold``.
    """
    t: float
    ks_statistic: float
    sample_size: int
    threshold: float
    passed: bool

    def to_dict(self):
        report = asdict(self)
        report["pass"] = report.pop("passed")
        return report


@dataclass(frozen=True)
class RegimeReport:
    """Regime of a two-packet frame and the proxies behind it.

    Attributes
    ----------
    t : float
    regime : {'huygens-ehrenfest-fresnel', 'transition', 'fraunhofer'}
    thresholds : (float, float)
        Visibility bounds between the early regime, the transition and the
        far field.
    visibility : float
        Cross-term density at x = 0 over the peak density of one packet.
    measured_spacing, predicted_spacing : float or None
        Set when the fringe profile was checked for stationarity.
    """
    t: float
    regime: str
    thresholds: tuple
    visibility: float
    measured_spacing: float = None
    predicted_spacing: float = None

    def to_dict(self):
        report = asdict(self)
        report["thresholds"] = list(self.thresholds)
        return report


def equivariance_test(ensemble, rho_t, t, threshold=None, support=None):
    """Two-sided KS distance between ensemble positions at t and a density.

    Parameters
    ----------
    ensemble : bohmlib.trajectories.Ensemble

    rho_t : callable
        Vectorized ``x -> rho(x, t)``, normalized.

    t : float
        A stored time of the ensemble.

    threshold : float, optional
        Pass bound on the statistic; default ``2 / sqrt(count)``.

    support : (float, float), optional
        Interval for the tabulated CDF. At the first stored time it defaults
        to the sampling support; otherwise to the range of the positions
        widened by that range on each side.

    Returns
    -------
    EquivarianceReport

    Raises
    ------
    ValueError
        If t is not a stored time.
    """
    positions = ensemble.positions_at(t)
    if positions.size == 0:
        raise ValueError("Error when checking ensemble: no finite position at t={}".format(t))
    if support is None:
        if ensemble.time_index(t) == 0 and "support" in ensemble.provenance:
            support = tuple(ensemble.provenance["support"])
        else:
            span = max(float(positions.max() - positions.min()), 1.0)
            support = (float(positions.min()) - span, float(positions.max()) + span)
    threshold = 2 / math.sqrt(positions.size) if threshold is None else threshold
    statistic = float(kstest(positions, TabulatedCDF(rho_t, support)).statistic)
    return EquivarianceReport(t=float(t),
                              ks_statistic=statistic,
                              sample_size=int(positions.size),
                              threshold=float(threshold),
                              passed=bool(statistic < threshold))


def _refine(x, values, index):
    """Parabolic refinement of discrete extrema at ``index``."""
    a, b, c = values[index - 1], values[index], values[index + 1]
    denom = a - 2 * b + c
    with np.errstate(divide="ignore", invalid="ignore"):
        offset = np.where(denom != 0, 0.5 * (a - c) / denom, 0.0)
    return x[index] + offset * (x[1] - x[0])


def find_maxima(x, rho, floor=MAXIMA_FLOOR):
    """Indices of the interior local maxima of rho (3-point test) that reach
    ``floor`` times the global maximum."""
    rho = np.asarray(rho)
    peak = (rho[1:-1] > rho[:-2]) & (rho[1:-1] >= rho[2:]) & (rho[1:-1] >= floor * rho.max())
    return np.flatnonzero(peak) + 1


def fringe_minima(x, rho, floor=MAXIMA_FLOOR):
    """Refined positions of the density minima separating adjacent maxima.

    Returns
    -------
    maxima : array of int
        Indices of the maxima, as ``find_maxima``.

    minima : array of float
        One refined minimum between each pair of adjacent maxima.
    """
    rho = np.asarray(rho)
    maxima = find_maxima(x, rho, floor)
    index = np.array([a + int(np.argmin(rho[a:b + 1])) for a, b in zip(maxima[:-1], maxima[1:])], dtype=int)
    if index.size == 0:
        return maxima, np.array([])
    return maxima, _refine(np.asarray(x), rho, index)


def measure_fringe_spacing(frame):
    """Measured distance between adjacent fringes of a density frame.

    The maxima of rho locate the fringes: the central fringes are the (up
    to) five maxima closest to the highest one. Gaps are measured between
    the parabolically refined minima that separate them, since the envelope
    pulls the maxima toward the centre while the minima stay on the fringe
    lattice; the median gap is returned.

    Parameters
    ----------
    frame : bohmlib.fields.FieldFrame

    Returns
    -------
    float

    Raises
    ------
    bohmlib.exceptions.NotFringedError
        If rho has fewer than three maxima.
    """
    maxima = find_maxima(frame.x, frame.rho)
    if maxima.size < 3:
        raise NotFringedError("not in fringed regime: found {} maxima of rho at t={}".format(maxima.size, frame.t))
    top = maxima[np.argmax(frame.rho[maxima])]
    central = np.sort(maxima[np.argsort(np.abs(maxima - top), kind="stable")[:CENTRAL_FRINGES]])
    window = slice(central[0] - 1, central[-1] + 2)
    _, minima = fringe_minima(frame.x[window], frame.rho[window], floor=0.0)
    return float(np.median(np.diff(minima)))


def cross_term_visibility(params, frame):
    """Cross-term density at x = 0 (frame density minus the closed-form
    packet terms) over the peak density of one packet; zero when d = 0."""
    if params.d == 0:
        return 0.0
    i0 = frame.grid.index_nearest(0.0)
    x0 = frame.x[i0]
    cross = frame.rho[i0] - float(model.rho_incoherent(params, x0, frame.t))
    return float(cross / model.packet_peak(params, frame.t))


def classify_regime(params, frame, thresholds=DEFAULT_REGIME_THRESHOLDS, stationarity=0.05):
    """Classify a two-packet frame by measurable proxies.

    Parameters
    ----------
    params : bohmlib.model.TwoSlitParams

    frame : bohmlib.fields.FieldFrame

    thresholds : (float, float), default=(0.01, 0.9)
        Visibility below the first: the packets evolve independently.
        Below the second: a fringed structure is developing.

    stationarity : float, default=0.05
        Above the second threshold the frame is in the far field only if the
        measured fringe spacing is within this relative distance of
        ``fringe_spacing(t)``; otherwise it is still a transition. Packets
        that already overlap at t = 0 are a transition.

    Returns
    -------
    RegimeReport
    """
    low, high = thresholds
    visibility = cross_term_visibility(params, frame)
    measured = predicted = None
    if visibility < low:
        regime = REGIMES[0]
    elif visibility < high or not frame.t > 0:
        regime = REGIMES[1]
    else:
        predicted = model.fringe_spacing(params, frame.t)
        try:
            measured = measure_fringe_spacing(frame)
        except NotFringedError:
            regime = REGIMES[1]
        else:
            regime = REGIMES[2] if abs(measured / predicted - 1) <= stationarity else REGIMES[1]
    return RegimeReport(t=float(frame.t),
                        regime=regime,
                        thresholds=tuple(thresholds),
                        visibility=visibility,
                        measured_spacing=measured,
                        predicted_spacing=predicted)


def residual_summary(frames, V=None):
    """Continuity and Hamilton-Jacobi residual max-norms per adjacent pair.

    Parameters
    ----------
    frames : sequence of bohmlib.fields.FieldFrame
        At least two frames, in time order.

    V : array-like, optional
        External potential on the grid.

    Returns
    -------
    dict
        ``pairs`` (one entry per adjacent pair with ``t``, ``continuity``
        and ``hj``), ``continuity_max`` and ``hj_max``.
    """
    if len(frames) < 2:
        raise ValueError("Error when checking frames: expected at least 2 but got {}".format(len(frames)))
    pairs = []
    for frame_a, frame_b in zip(frames[:-1], frames[1:]):
        pairs.append({"t": 0.5 * (frame_a.t + frame_b.t),
                      "continuity": continuity_residual(frame_a, frame_b).max_norm,
                      "hj": hj_residual(frame_a, frame_b, V).max_norm})
    return {"pairs": pairs,
            "continuity_max": max(pair["continuity"] for pair in pairs),
            "hj_max": max(pair["hj"] for pair in pairs)}


def node_avoidance(ensemble, frame, window=0.05, spacing=None):
    """Fraction of positions lying near a fringe minimum of the density.

    Parameters
    ----------
    ensemble : bohmlib.trajectories.Ensemble
        Must store positions at ``frame.t``.

    frame : bohmlib.fields.FieldFrame

    window : float, default=0.05
        Half width of the exclusion zone around each minimum, in fringe
        widths.

    spacing : float, optional
        Fringe width; measured from the frame by default.

    Returns
    -------
    dict
        ``fraction`` of positions within the zones and ``pass``, True when
        the fraction is below ``window``, half of what a uniform spread of
        positions would give.
    """
    spacing = measure_fringe_spacing(frame) if spacing is None else spacing
    _, minima = fringe_minima(frame.x, frame.rho)
    positions = ensemble.positions_at(frame.t)
    if minima.size:
        near = np.min(np.abs(positions[:, None] - minima[None, :]), axis=1) < window * spacing
    else:
        near = np.zeros(positions.shape, dtype=bool)
    fraction = float(np.mean(near))
    return {"t": float(frame.t),
            "fraction": fraction,
            "window": window,
            "fringe_width": float(spacing),
            "minima": int(minima.size),
            "pass": fraction < window}


def asymptotic_convergence(params, times, x):
    """Max-norm gap between the asymptotic and the exact density at each
    time, relative to the exact peak.

    Returns
    -------
    list of float
    """
    gaps = []
    for t in times:
        exact = model.rho_closed_form(params, x, t)
        gaps.append(float(np.max(np.abs(model.rho_asymptotic(params, x, t) - exact)) / np.max(exact)))
    return gaps


def fringe_law(params, frames):
    """Fit the measured fringe spacing of each frame against time.

    Returns
    -------
    dict
        ``times``, ``measured``, ``slope`` of the linear regression,
        ``predicted_slope`` = 2 pi hbar / m d and ``relative_deviation``.
    """
    times = [float(frame.t) for frame in frames]
    measured = [measure_fringe_spacing(frame) for frame in frames]
    slope = float(linregress(times, measured).slope)
    predicted = 2 * math.pi * params.hbar / (params.mass * params.d)
    return {"times": times,
            "measured": measured,
            "slope": slope,
            "predicted_slope": predicted,
            "relative_deviation": abs(slope / predicted - 1)}


def crossing_violations(ensemble, tol=1e-10):
    """Number of (time, neighbour pair) entries where the order by initial
    condition is broken by more than ``tol``."""
    gaps = np.diff(ensemble.positions, axis=1)
    with np.errstate(invalid="ignore"):
        return int(np.count_nonzero(gaps < -tol))


def mirror_defect(ensemble):
    """Largest ``|x_k(t) + x_(count-1-k)(t)|`` over stored times and pairs."""
    return float(np.nanmax(np.abs(ensemble.positions + ensemble.positions[:, ::-1])))
