"""Grid Module.

Uniform periodic grids and wavefunctions sampled on them.

The grid is periodic: the ``n`` points are ::

        x_j = x_min + j*spacing,   j = 0, ..., n-1,   spacing = (x_max - x_min)/n

so ``x_max`` itself is the periodic image of ``x_min`` and is not stored.
"""
from dataclasses import dataclass, field

import numpy as np

from bohmlib.exceptions import GridMismatchError


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid.

    Parameters
    ----------
    x_min : float
        Left end of the periodic cell.

    x_max : float
        Right end of the periodic cell (excluded from the points).

    n : integer
        Number of points, a power of two not smaller than 16.
    """
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        violations = self.violations(self.x_min, self.x_max, self.n)
        if violations:
            raise ValueError("Error when checking grid: " + "; ".join(violations))

    @staticmethod
    def violations(x_min, x_max, n):
        """Returns the list of constraints violated by the given grid values."""
        found = []
        if not x_max > x_min:
            found.append("expected x_max > x_min but got x_min={}, x_max={}".format(x_min, x_max))
        if int(n) != n or n < 16:
            found.append("expected an integer n >= 16 but got n={}".format(n))
        elif int(n) & (int(n) - 1):
            found.append("expected n to be a power of two but got n={}".format(n))
        return found

    @property
    def spacing(self):
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self):
        return self.x_max - self.x_min

    @property
    def points(self):
        """Array of the ``n`` grid abscissae."""
        return self.x_min + self.spacing * np.arange(self.n)

    @property
    def wavenumbers(self):
        """Angular wavenumbers in FFT order, ``2*pi*fftfreq(n, spacing)``."""
        return 2 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)

    def index_nearest(self, x):
        """Index of the grid point nearest to ``x``."""
        return int(np.clip(np.rint((x - self.x_min) / self.spacing), 0, self.n - 1))

    def check_same(self, other):
        """Raise GridMismatchError if ``other`` is a different grid."""
        if self != other:
            raise GridMismatchError(
                "Error when checking grid: expected {} but got {}".format(self, other))


@dataclass(frozen=True, eq=False)
class WaveSample:
    """A wavefunction sampled on a grid at one time.

    Parameters
    ----------
    grid : GridSpec

    t : float
        Time of the sample.

    values : array-like of complex, shape (grid.n,)
        Complex amplitudes at ``grid.points``.
    """
    grid: GridSpec
    t: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError("Error when checking wave sample: expected shape ({},) but got {}".format(
                self.grid.n, values.shape))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.points

    @property
    def norm(self):
        """Discrete norm ``sum |psi_j|^2 * spacing``."""
        return float(np.sum(np.abs(self.values)**2) * self.grid.spacing)

    @property
    def normalized(self):
        return bool(abs(self.norm - 1.0) <= 1e-9)

    @property
    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def replace(self, values, t=None):
        """Returns a new sample on the same grid with new values (and time)."""
        return WaveSample(self.grid, self.t if t is None else t, values)
