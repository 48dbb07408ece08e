"""Derivative Operators Module.

Derivatives of fields sampled on a uniform periodic grid.
"""

import numpy as np


class Derivative:
    """Base class for the derivative operators.

    Warning: This class should not be used directly.
    Use derived classes instead.

    Parameters
    ----------
    spacing : float
        Grid spacing.
    """
    def __init__(self, spacing):
        if not spacing > 0:
            raise ValueError("Error when checking spacing: expected a positive value but got {}".format(spacing))
        self.spacing = spacing

    def d(self, f, order=1):
        """Compute the ``order``-th derivative of f.

        Warning: Overrides this method in order to
        implement the derivative.

        Parameters
        ----------
        f : array-like, shape = [n]
            Periodic samples of the field (real or complex).

        order : integer, default=1
            Derivative order (1 or 2 for every implementation).
        """
        raise NotImplementedError

    def d1(self, f):
        return self.d(f, 1)

    def d2(self, f):
        return self.d(f, 2)


class SpectralDerivative(Derivative):
    """Spectral derivative on a periodic grid.

    The field is transformed with the FFT, multiplied by ``(i*k)**order`` and
    transformed back. For even orders the Nyquist mode is kept; for odd orders
    it is dropped so that real fields stay real.
    """
    def d(self, f, order=1):
        f = np.asarray(f)
        n = f.shape[-1]
        k = 2 * np.pi * np.fft.fftfreq(n, d=self.spacing)
        multiplier = (1j * k)**order
        if order % 2 == 1:
            multiplier[n // 2] = 0
        out = np.fft.ifft(multiplier * np.fft.fft(f))
        if np.isrealobj(f):
            return out.real
        return out


class CenteredDifference(Derivative):
    """Fourth-order centered finite differences with periodic wrap::

            f'  ~ (f[j-2] - 8 f[j-1] + 8 f[j+1] - f[j+2]) / 12h
            f'' ~ (-f[j-2] + 16 f[j-1] - 30 f[j] + 16 f[j+1] - f[j+2]) / 12h^2
    """
    def d(self, f, order=1):
        f = np.asarray(f)
        h = self.spacing
        fm2, fm1 = np.roll(f, 2), np.roll(f, 1)
        fp1, fp2 = np.roll(f, -1), np.roll(f, -2)
        if order == 1:
            return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
        if order == 2:
            return (-fm2 + 16 * fm1 - 30 * f + 16 * fp1 - fp2) / (12 * h * h)
        raise ValueError("CenteredDifference supports order 1 or 2, got {}".format(order))


def get_derivative(name, spacing):
    """Returns the derivative operator registered under ``name``
    (``"spectral"`` or ``"fd4"``)."""
    operators = {"spectral": SpectralDerivative, "fd4": CenteredDifference}
    if name not in operators:
        raise ValueError("Unknown derivative '{}', expected one of {}".format(name, sorted(operators)))
    return operators[name](spacing)
