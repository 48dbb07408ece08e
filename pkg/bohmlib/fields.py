"""Hydrodynamic Fields Module.

Polar decomposition of a sampled wavefunction, ``psi = sqrt(rho) exp(i S / hbar)``,
and the fields derived from it::

        rho = |psi|^2
        S   = hbar arg(psi)
        J   = (hbar / m) Im(psi* psi')                          probability flux
        v   = J / rho                                           Bohmian velocity
        Q   = -(hbar^2 / 8m) [2 rho''/rho - (rho'/rho)^2]       quantum potential

plus the residuals of the continuity and quantum Hamilton-Jacobi equations
evaluated on a pair of frames. Derivatives are spectral by default, which
treats the grid as periodic.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from bohmlib.derivatives import get_derivative
from bohmlib.exceptions import GridMismatchError
from bohmlib.grid import WaveSample
from bohmlib.utils.io_utils import write_csv

logger = logging.getLogger(__name__)

DEFAULT_NODE_EPS = 1e-12
BOUNDARY_TOLERANCE = 1e-14


def check_periodic(w):
    """Warn when the amplitude at the cell boundary is not negligible.

    Returns
    -------
    boolean
        True when the boundary amplitude is below ``BOUNDARY_TOLERANCE``
        times the peak amplitude.
    """
    amplitude = np.abs(w.values)
    peak = amplitude.max()
    edge = max(amplitude[0], amplitude[-1])
    if peak > 0 and edge > BOUNDARY_TOLERANCE * peak:
        logger.warning("boundary amplitude %.3e of peak at t=%g: spectral derivatives "
                       "see the periodic images of the state", edge / peak, w.t)
        return False
    return True


def node_threshold(rho, eps=None):
    """Absolute node threshold: ``eps`` if given, else ``DEFAULT_NODE_EPS * max(rho)``."""
    return DEFAULT_NODE_EPS * float(np.max(rho)) if eps is None else eps


def nodes(rho, eps=None):
    """Boolean node mask: rho below the threshold, or exactly zero."""
    return (rho < node_threshold(rho, eps)) | (rho <= 0)


def _fill_masked(x, values, mask):
    """Linear interpolation of ``values`` at masked points from the unmasked ones."""
    if not mask.any():
        return values
    filled = values.copy()
    filled[mask] = np.interp(x[mask], x[~mask], values[~mask])
    return filled


def unwrap_phase(S, anchor, hbar=1.0):
    """Remove the 2 pi hbar jumps of a wrapped phase along the grid.

    The result keeps the wrapped value at index ``anchor``.
    """
    phase = np.unwrap(np.asarray(S) / hbar)
    phase += S[anchor] / hbar - phase[anchor]
    return hbar * phase


def decompose(w, unwrap=False, hbar=1.0):
    """Polar decomposition of a wave sample.

    Parameters
    ----------
    w : bohmlib.grid.WaveSample

    unwrap : boolean, default=False
        If True, S is made continuous along the grid, anchored at the grid
        point nearest to x = 0.

    hbar : float, default=1

    Returns
    -------
    rho : array
        ``|psi|^2``.

    S : array
        ``hbar arg(psi)`` in (-pi hbar, pi hbar], or unwrapped. Values at
        nodes are not reliable.
    """
    if not w.is_finite:
        raise ValueError("Error when checking wave sample: values must be finite")
    rho = np.abs(w.values)**2
    S = hbar * np.angle(w.values)
    S = np.where(S <= -math.pi * hbar, S + 2 * math.pi * hbar, S)
    if unwrap:
        S = unwrap_phase(S, w.grid.index_nearest(0.0), hbar)
    return rho, S


def current_density(w, hbar=1.0, mass=1.0, derivative="spectral"):
    """Probability flux ``J = (1/m) Re{psi* (-i hbar d/dx) psi} = (hbar/m) Im(psi* psi')``."""
    dpsi = get_derivative(derivative, w.grid.spacing).d1(w.values)
    return hbar / mass * np.imag(np.conj(w.values) * dpsi)


def velocity(w, eps=None, hbar=1.0, mass=1.0, derivative="spectral"):
    """Bohmian velocity ``v = J / rho``.

    Parameters
    ----------
    w : bohmlib.grid.WaveSample

    eps : float, optional
        Absolute node threshold on rho; default ``1e-12 * max(rho)``.

    Returns
    -------
    v : array
        Velocity; at masked points it is linearly interpolated from the
        nearest unmasked neighbours.

    node_mask : array of bool
        True where ``rho < eps``.

    Raises
    ------
    ValueError
        If every point is masked.
    """
    rho = np.abs(w.values)**2
    mask = nodes(rho, eps)
    if mask.all():
        raise ValueError("Error when checking density: every grid point is below the node threshold")
    J = current_density(w, hbar, mass, derivative)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(mask, 0.0, J / np.where(mask, 1.0, rho))
    return _fill_masked(w.x, v, mask), mask


def quantum_potential(source, form="density", hbar=1.0, mass=1.0, spacing=None, eps=None,
                      derivative="spectral"):
    """Bohm's quantum potential.

    Parameters
    ----------
    source : bohmlib.grid.WaveSample or array-like
        A wave sample, or a density array (density form only).

    form : {'density', 'dynamical'}, default='density'
        - 'density', from rho alone::

                Q = -(hbar^2 / 8m) [2 rho''/rho - (rho'/rho)^2]

        - 'dynamical', from the momentum operator acting on psi::

                Q = (1/2m) {Re(p^2 psi / psi) - [Re(p psi / psi)]^2}
                  = -(hbar^2 / 2m) {Re(psi''/psi) + [Im(psi'/psi)]^2}

    spacing : float, optional
        Grid spacing; required when ``source`` is a density array.

    eps : float, optional
        Absolute node threshold on rho; default ``1e-12 * max(rho)``.
        Masked points are filled by linear interpolation.

    Returns
    -------
    array
    """
    if isinstance(source, WaveSample):
        values, spacing, x = source.values, source.grid.spacing, source.x
        rho = np.abs(values)**2
    else:
        if form != "density":
            raise ValueError("the dynamical form needs a WaveSample, not a density array")
        if spacing is None:
            raise ValueError("spacing is required when a density array is given")
        rho = np.asarray(source, dtype=float)
        x = spacing * np.arange(rho.size)
    op = get_derivative(derivative, spacing)
    mask = nodes(rho, eps)
    if mask.all():
        raise ValueError("Error when checking density: every grid point is below the node threshold")
    safe = np.where(mask, 1.0, rho)
    with np.errstate(divide="ignore", invalid="ignore"):
        if form == "density":
            ratio1 = op.d1(rho) / safe
            ratio2 = op.d2(rho) / safe
            Q = -(hbar**2 / (8 * mass)) * (2 * ratio2 - ratio1**2)
        elif form == "dynamical":
            safe_psi = np.where(mask, 1.0, values)
            log_d1 = op.d1(values) / safe_psi
            log_d2 = op.d2(values) / safe_psi
            Q = -(hbar**2 / (2 * mass)) * (np.real(log_d2) + np.imag(log_d1)**2)
        else:
            raise ValueError("Unknown quantum potential form '{}', expected 'density' or 'dynamical'".format(form))
    Q = np.where(mask, 0.0, Q)
    return _fill_masked(x, Q, mask)


@dataclass(frozen=True, eq=False)
class FieldFrame:
    """Hydrodynamic fields on a grid at one time.

    Attributes
    ----------
    grid : bohmlib.grid.GridSpec
    t : float
    rho, S, S_unwrapped, J, v, Q : arrays
        S is wrapped in (-pi hbar, pi hbar]; S_unwrapped is anchored at the
        grid point nearest to x = 0.
    node_mask : array of bool
        True where rho is below the node threshold.
    hbar, mass : float
    """
    grid: object
    t: float
    rho: np.ndarray = field(repr=False)
    S: np.ndarray = field(repr=False)
    S_unwrapped: np.ndarray = field(repr=False)
    J: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)
    node_mask: np.ndarray = field(repr=False)
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("rho", "S", "S_unwrapped", "J", "v", "Q", "node_mask"):
            getattr(self, name).setflags(write=False)

    @property
    def x(self):
        return self.grid.points

    def columns(self):
        """Named columns in CSV order."""
        return {"x": self.x,
                "rho": self.rho,
                "S_wrapped": self.S,
                "S_unwrapped": self.S_unwrapped,
                "S_over_hbar": self.S / self.hbar,
                "J": self.J,
                "v": self.v,
                "Q": self.Q,
                "node_mask": self.node_mask.astype(int)}

    def to_csv(self, path, params=None):
        """Write the frame as CSV, one row per grid point.

        The header comment carries t and the parameter set (``params``, a
        dict or an object with ``to_dict``; hbar and mass otherwise).
        """
        if params is None:
            params = {"hbar": self.hbar, "mass": self.mass}
        elif hasattr(params, "to_dict"):
            params = params.to_dict()
        described = ", ".join("{}={!r}".format(key, value) for key, value in sorted(params.items()))
        write_csv(path, self.columns(), comments=["t={!r}, {}".format(float(self.t), described)])


def field_frame(w, hbar=1.0, mass=1.0, eps=None, q_form="dynamical", derivative="spectral"):
    """Compute every hydrodynamic field of a wave sample.

    Parameters
    ----------
    w : bohmlib.grid.WaveSample

    eps : float, optional
        Absolute node threshold; default ``1e-12 * max(rho)``.

    q_form : {'dynamical', 'density'}, default='dynamical'
        Which form of the quantum potential to store.

    Returns
    -------
    FieldFrame
    """
    check_periodic(w)
    rho, S = decompose(w, hbar=hbar)
    eps = node_threshold(rho, eps)
    v, mask = velocity(w, eps, hbar, mass, derivative)
    return FieldFrame(grid=w.grid,
                      t=w.t,
                      rho=rho,
                      S=S,
                      S_unwrapped=unwrap_phase(S, w.grid.index_nearest(0.0), hbar),
                      J=current_density(w, hbar, mass, derivative),
                      v=v,
                      Q=quantum_potential(w, q_form, hbar, mass, eps=eps, derivative=derivative),
                      node_mask=mask,
                      hbar=hbar,
                      mass=mass)


@dataclass(frozen=True, eq=False)
class Residual:
    """Residual field of a frame pair, centred at ``t``.

    ``max_norm`` is taken over the points where ``mask`` is False.
    """
    t: float
    values: np.ndarray = field(repr=False)
    mask: np.ndarray = field(repr=False)
    max_norm: float = 0.0


def _pair_step(frame_a, frame_b):
    if frame_a.grid != frame_b.grid:
        raise GridMismatchError("Error when checking frames: expected the same grid but got {} and {}".format(
            frame_a.grid, frame_b.grid))
    delta = frame_b.t - frame_a.t
    if delta == 0:
        raise ValueError("Error when checking frames: the two frames are at the same time {}".format(frame_a.t))
    return delta


def _max_norm(values, mask):
    kept = np.abs(values[~mask])
    return float(kept.max()) if kept.size else 0.0


def continuity_residual(frame_a, frame_b):
    """Continuity residual ``d_t rho + d_x (rho d_x S / m)`` of two frames.

    ``d_t`` is the difference quotient across the pair and the flux
    divergence is averaged over both frames, so both terms are centred at
    the mid time and the residual is second order in the time separation.

    Returns
    -------
    Residual
    """
    delta = _pair_step(frame_a, frame_b)
    op = get_derivative("spectral", frame_a.grid.spacing)
    values = (frame_b.rho - frame_a.rho) / delta + 0.5 * (op.d1(frame_a.J) + op.d1(frame_b.J))
    mask = np.zeros(values.shape, dtype=bool)
    return Residual(0.5 * (frame_a.t + frame_b.t), values, mask, _max_norm(values, mask))


def hj_residual(frame_a, frame_b, V=None):
    """Quantum Hamilton-Jacobi residual ``d_t S + (d_x S)^2 / 2m + V + Q``.

    ``d_x S`` is taken as ``m v``; the difference of the unwrapped phases is
    reduced modulo ``2 pi hbar`` before dividing by the time separation.

    Parameters
    ----------
    frame_a, frame_b : FieldFrame

    V : array-like, optional
        External potential on the grid (zero if omitted).

    Returns
    -------
    Residual
        ``max_norm`` over the points unmasked in both frames.
    """
    delta = _pair_step(frame_a, frame_b)
    hbar, mass = frame_a.hbar, frame_a.mass
    V = np.zeros(frame_a.grid.n) if V is None else np.asarray(V, dtype=float)
    dS = frame_b.S_unwrapped - frame_a.S_unwrapped
    dS = dS - 2 * math.pi * hbar * np.round(dS / (2 * math.pi * hbar))
    energy_a = 0.5 * mass * frame_a.v**2 + frame_a.Q
    energy_b = 0.5 * mass * frame_b.v**2 + frame_b.Q
    values = dS / delta + 0.5 * (energy_a + energy_b) + V
    mask = frame_a.node_mask | frame_b.node_mask
    return Residual(0.5 * (frame_a.t + frame_b.t), values, mask, _max_norm(values, mask))
