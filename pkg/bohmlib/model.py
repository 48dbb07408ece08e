"""Analytic Model Module.

Closed form of two mutually coherent Gaussian wave packets released at
``x = -d/2`` and ``x = +d/2`` and evolving freely along the transverse
coordinate. At time t each packet reads ::

        g(x, t) = exp(-(x - c)^2 / (4 sigma0 sigma~_t)),   sigma~_t = sigma0 + i (hbar/2 m sigma0) t

and the normalized state is ::

        psi(x, t) = N0 sqrt(sigma0/sigma~_t) [ g_+(x, t) + g_-(x, t) ]

The prefactor ``sqrt(sigma0/sigma~_t)`` makes psi an exact solution of the
free Schrodinger equation (it carries the amplitude decay and the phase that
the bare sum of Gaussians lacks); ``N0`` fixes the norm to one at every time.
All functions broadcast over ``x``; ``t`` is a scalar.
"""
import math
from dataclasses import dataclass, asdict

import numpy as np


@dataclass(frozen=True)
class TwoSlitParams:
    """Physical constants and model parameters.

    Parameters
    ----------
    hbar : float, default=1
        Reduced Planck constant (action units).

    mass : float, default=1
        Particle mass.

    sigma0 : float, default=0.5
        Initial width of each Gaussian packet.

    d : float, default=10
        Slit separation. ``d = 0`` is accepted and collapses the
        superposition onto a single Gaussian.
    """
    hbar: float = 1.0
    mass: float = 1.0
    sigma0: float = 0.5
    d: float = 10.0

    def __post_init__(self):
        violations = self.violations(self.hbar, self.mass, self.sigma0, self.d)
        if violations:
            raise ValueError("Error when checking model parameters: " + "; ".join(violations))

    @staticmethod
    def violations(hbar, mass, sigma0, d):
        """Returns the list of constraints violated by the given values."""
        found = []
        for name, value in (("hbar", hbar), ("mass", mass), ("sigma0", sigma0)):
            if not (math.isfinite(value) and value > 0):
                found.append("expected {} > 0 but got {}".format(name, value))
        if not (math.isfinite(d) and d >= 0):
            found.append("expected d >= 0 but got {}".format(d))
        return found

    @classmethod
    def defaults(cls):
        """hbar = 1, m = 1, sigma0 = 0.5, d = 10."""
        return cls()

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class ComplexWidth:
    """Complex packet width ``sigma~_t = re + i*im``."""
    re: float
    im: float

    @property
    def magnitude(self):
        return math.hypot(self.re, self.im)

    def __complex__(self):
        return complex(self.re, self.im)


def _check_time(t):
    if not t >= 0:
        raise ValueError("Error when checking time: expected t >= 0 but got {}".format(t))


def tau(params):
    """Characteristic spreading time ``tau = 2 m sigma0^2 / hbar``."""
    return 2 * params.mass * params.sigma0**2 / params.hbar


def spreading_velocity(params):
    """Asymptotic spreading rate ``v_s = hbar / 2 m sigma0``."""
    return params.hbar / (2 * params.mass * params.sigma0)


def sigma_complex(params, t):
    """Complex width ``sigma~_t = sigma0 + i (hbar / 2 m sigma0) t``.

    Returns
    -------
    ComplexWidth
    """
    _check_time(t)
    return ComplexWidth(params.sigma0, spreading_velocity(params) * t)


def sigma_abs(params, t):
    """Packet width ``sigma_t = |sigma~_t| = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)``."""
    _check_time(t)
    return params.sigma0 * math.sqrt(1 + (t / tau(params))**2)


def normalization(params):
    """Time independent factor N0 such that the integral of |psi|^2 is one.

    From the overlap of the two t=0 Gaussians::

            1/N0^2 = 2 sqrt(2 pi) sigma0 (1 + exp(-d^2 / 8 sigma0^2))
    """
    s0 = params.sigma0
    return 1 / math.sqrt(2 * math.sqrt(2 * math.pi) * s0 * (1 + math.exp(-params.d**2 / (8 * s0**2))))


def _exponents(params, x, t):
    """Complex exponents of the packets centred at -d/2 (first) and +d/2 (second)."""
    x = np.asarray(x, dtype=float)
    width = params.sigma0 * complex(sigma_complex(params, t))
    half = params.d / 2
    return -(x + half)**2 / (4 * width), -(x - half)**2 / (4 * width)


def psi(params, x, t, raw=False):
    """Two-packet wavefunction at positions x and time t.

    Parameters
    ----------
    params : TwoSlitParams

    x : float or array-like

    t : float
        Time, t >= 0.

    raw : boolean, default=False
        If True, return the bare sum of the two Gaussians, without the
        prefactor and normalization (the form used for figure matching).

    Returns
    -------
    complex or array of complex
    """
    e_plus, e_minus = _exponents(params, x, t)
    bare = np.exp(e_plus) + np.exp(e_minus)
    if raw:
        return bare
    prefactor = normalization(params) * np.sqrt(params.sigma0 / complex(sigma_complex(params, t)))
    return prefactor * bare


def psi_single(params, x, t, center=0.0):
    """One normalized free Gaussian packet of initial width sigma0 centred at ``center``."""
    s0 = params.sigma0
    width = complex(sigma_complex(params, t))
    x = np.asarray(x, dtype=float)
    return ((2 * math.pi * s0**2)**-0.25 * np.sqrt(s0 / width)
            * np.exp(-(x - center)**2 / (4 * s0 * width)))


def rho_closed_form(params, x, t, raw=False):
    """Probability density written as packet terms plus the interference term::

            rho = A(t) [ exp(-(x + d/2)^2 / 2 sigma_t^2) + exp(-(x - d/2)^2 / 2 sigma_t^2)
                         + 2 exp(-(x^2 + d^2/4) / 2 sigma_t^2) cos(k_t x) ]

    with ``k_t = hbar t d / (4 m sigma0^2 sigma_t^2)`` and
    ``A(t) = N0^2 sigma0 / sigma_t`` (``A = 1`` when ``raw`` is True).
    """
    x = np.asarray(x, dtype=float)
    s_t = sigma_abs(params, t)
    half = params.d / 2
    k_t = params.hbar * t * params.d / (4 * params.mass * params.sigma0**2 * s_t**2)
    bracket = (np.exp(-(x + half)**2 / (2 * s_t**2)) + np.exp(-(x - half)**2 / (2 * s_t**2))
               + 2 * np.exp(-(x**2 + half**2) / (2 * s_t**2)) * np.cos(k_t * x))
    if raw:
        return bracket
    return normalization(params)**2 * params.sigma0 / s_t * bracket


def rho_incoherent(params, x, t):
    """Packet terms of ``rho_closed_form`` without the interference term."""
    x = np.asarray(x, dtype=float)
    s_t = sigma_abs(params, t)
    half = params.d / 2
    packets = np.exp(-(x + half)**2 / (2 * s_t**2)) + np.exp(-(x - half)**2 / (2 * s_t**2))
    return normalization(params)**2 * params.sigma0 / s_t * packets


def packet_peak(params, t):
    """Peak density of one packet term, ``A(t) = N0^2 sigma0 / sigma_t``."""
    return normalization(params)**2 * params.sigma0 / sigma_abs(params, t)


def rho_asymptotic(params, x, t):
    """Long-time density, obtained from ``rho_closed_form`` with
    ``sigma_t -> v_s t``; the cosine argument becomes ``(m d / hbar)(x / t)``.

    Raises
    ------
    ValueError
        If t <= 0, where the asymptotic form is undefined.
    """
    if not t > 0:
        raise ValueError("Error when checking time: the asymptotic density needs t > 0 but got {}".format(t))
    x = np.asarray(x, dtype=float)
    width = spreading_velocity(params) * t
    half = params.d / 2
    bracket = (np.exp(-(x + half)**2 / (2 * width**2)) + np.exp(-(x - half)**2 / (2 * width**2))
               + 2 * np.exp(-(x**2 + half**2) / (2 * width**2))
               * np.cos(params.mass * params.d / params.hbar * x / t))
    return normalization(params)**2 * params.sigma0 / width * bracket


def phase_closed_form(params, x, t):
    """Local phase ``S = hbar arg(psi)`` in the branch (-pi hbar, pi hbar]."""
    s = params.hbar * np.angle(psi(params, x, t))
    return np.where(s <= -math.pi * params.hbar, s + 2 * math.pi * params.hbar, s)


def velocity_closed_form(params, x, t):
    """Bohmian velocity ``(hbar/m) Im(psi'/psi)`` of the closed form.

    Both packet weights are rescaled by the larger of the two real exponents
    before they are summed, so the ratio stays finite in the far tails where
    each Gaussian underflows.
    """
    e_plus, e_minus = _exponents(params, x, t)
    shift = np.maximum(e_plus.real, e_minus.real)
    w_plus, w_minus = np.exp(e_plus - shift), np.exp(e_minus - shift)
    half = params.d / 2
    width = params.sigma0 * complex(sigma_complex(params, t))
    log_derivative = -((np.asarray(x) + half) * w_plus + (np.asarray(x) - half) * w_minus) / (2 * width * (w_plus + w_minus))
    return params.hbar / params.mass * np.imag(log_derivative)


def fringe_spacing(params, t):
    """Distance between adjacent maxima (or nodes) in the far field,
    ``(2 pi hbar / m d) t``.

    Raises
    ------
    ValueError
        If t <= 0, or if d == 0 (a single packet has no fringes).
    """
    if not t > 0:
        raise ValueError("Error when checking time: fringe spacing needs t > 0 but got {}".format(t))
    if params.d == 0:
        raise ValueError("Error when checking model parameters: fringe spacing is undefined for d = 0")
    return 2 * math.pi * params.hbar * t / (params.mass * params.d)
