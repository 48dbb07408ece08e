"""Metrics Module.
"""

import numpy as np


def l2_distance(psi_a, psi_b, spacing):
    """Discrete L2 distance between two sampled wavefunctions

    Parameters
    ----------
    psi_a : array-like of complex, shape (n,)

    psi_b : array-like of complex, shape (n,)

    spacing : float
        Grid spacing.

    Returns
    -------
    float
        ``sqrt(sum |psi_a - psi_b|^2 * spacing)``
    """
    delta = np.asarray(psi_a) - np.asarray(psi_b)
    return float(np.sqrt(np.sum(np.abs(delta)**2) * spacing))


def phase_aligned_l2_distance(psi_a, psi_b, spacing):
    """L2 distance minimized over a global phase factor applied to ``psi_b``::

            min_phi || psi_a - exp(i phi) psi_b ||^2 = ||a||^2 + ||b||^2 - 2 |<b, a>|

    Returns
    -------
    float
    """
    a, b = np.asarray(psi_a), np.asarray(psi_b)
    overlap = np.vdot(b, a) * spacing
    squared = (np.sum(np.abs(a)**2) + np.sum(np.abs(b)**2)) * spacing - 2 * np.abs(overlap)
    return float(np.sqrt(max(squared, 0.0)))


def max_relative_error(y_true, y_pred, scale=None):
    """Max-norm error relative to ``scale`` (default: max |y_true|)

    Returns
    -------
    float
        A non-negative floating point value (the best value is 0.0)
    """
    y_true = np.asarray(y_true)
    scale = np.max(np.abs(y_true)) if scale is None else scale
    return float(np.max(np.abs(y_true - np.asarray(y_pred))) / scale)


def second_central_moment(x, density):
    """Variance of a density sampled on a uniform grid."""
    x, density = np.asarray(x), np.asarray(density)
    mass = np.sum(density)
    mean = np.sum(x * density) / mass
    return float(np.sum((x - mean)**2 * density) / mass)
