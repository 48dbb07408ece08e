import math

import numpy as np

from bohmlib import model
from bohmlib.exceptions import GridMismatchError
from bohmlib.grid import WaveSample
from bohmlib.utils.io_utils import read_csv, write_csv


def two_slit_state(params, grid, t=0.0, raw=False):
    """Sample the closed-form two-packet state on ``grid`` at time ``t``.

    Parameters
    ----------
    params : bohmlib.model.TwoSlitParams

    grid : bohmlib.grid.GridSpec

    t : float, default=0

    raw : boolean, default=False
        Unnormalized sum of Gaussians (see ``bohmlib.model.psi``).

    Returns
    -------
    bohmlib.grid.WaveSample
    """
    return WaveSample(grid, t, model.psi(params, grid.points, t, raw=raw))


def gaussian_state(params, grid, t=0.0, center=0.0):
    """Sample one free Gaussian packet of initial width ``params.sigma0``."""
    return WaveSample(grid, t, model.psi_single(params, grid.points, t, center))


def plane_wave(grid, mode=1, t=0.0, hbar=1.0, mass=1.0):
    """Normalized plane wave ``exp(i(kx - omega t)) / sqrt(L)`` on the grid lattice.

    ``k = 2 pi mode / L`` is a lattice wavenumber, so the wave is periodic on
    the cell, and ``omega = hbar k^2 / 2m`` is the free dispersion.
    """
    k = 2 * math.pi * mode / grid.length
    omega = hbar * k**2 / (2 * mass)
    return WaveSample(grid, t, np.exp(1j * (k * grid.points - omega * t)) / math.sqrt(grid.length))


def harmonic_potential(grid, omega=1.0, mass=1.0, center=0.0):
    """``V(x) = m omega^2 (x - center)^2 / 2`` sampled on the grid."""
    return 0.5 * mass * omega**2 * (grid.points - center)**2


def coherent_state(grid, t, omega=1.0, x0=0.0, p0=0.0, hbar=1.0, mass=1.0):
    """Coherent state of the harmonic potential, exact at every time.

    The packet keeps the ground-state width ``sqrt(hbar / m omega)`` while
    its centre and momentum follow the classical orbit ::

            q_t = x0 cos(omega t) + (p0 / m omega) sin(omega t)
            p_t = p0 cos(omega t) - m omega x0 sin(omega t)

    and ::

            psi(x, t) = (m omega / pi hbar)^(1/4) exp[-(m omega / 2 hbar)(x - q_t)^2
                        + i p_t x / hbar - i p_t q_t / 2 hbar - i omega t / 2]
    """
    q = x0 * math.cos(omega * t) + p0 / (mass * omega) * math.sin(omega * t)
    p = p0 * math.cos(omega * t) - mass * omega * x0 * math.sin(omega * t)
    x = grid.points
    exponent = (-mass * omega / (2 * hbar) * (x - q)**2
                + 1j * (p * x / hbar - p * q / (2 * hbar) - omega * t / 2))
    return WaveSample(grid, t, (mass * omega / (math.pi * hbar))**0.25 * np.exp(exponent))


def load_state(path, grid, t=0.0):
    """Load an initial state from a CSV of ``x, re, im`` rows.

    Raises
    ------
    ValueError
        If a column is missing.

    bohmlib.exceptions.GridMismatchError
        If the ``x`` column is not the grid's abscissae.
    """
    columns = read_csv(path)
    missing = [name for name in ("x", "re", "im") if name not in columns]
    if missing:
        raise ValueError("Error when loading {}: missing column(s) {}".format(path, ", ".join(missing)))
    x = columns["x"]
    if x.shape != (grid.n,) or not np.allclose(x, grid.points, rtol=0, atol=1e-9 * grid.spacing):
        raise GridMismatchError("Error when loading {}: x column does not match grid {}".format(path, grid))
    return WaveSample(grid, t, columns["re"] + 1j * columns["im"])


def save_state(w, path):
    """Write a wave sample as ``x, re, im`` rows."""
    write_csv(path, {"x": w.x, "re": w.values.real, "im": w.values.imag}, comments=["t={!r}".format(w.t)])
