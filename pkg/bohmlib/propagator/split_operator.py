import numpy as np
from scipy.stats import linregress

from bohmlib.datasets.states import coherent_state, harmonic_potential
from bohmlib.grid import GridSpec
from bohmlib.metrics import phase_aligned_l2_distance
from bohmlib.propagator.propagator import Propagator, PropagatorSpec


class SplitOperator(Propagator):
    """Strang split-operator propagator.

    One step of size dt applies ::

            psi <- exp(-i V dt / 2 hbar) IFFT[ exp(-i hbar k^2 dt / 2m) FFT[ exp(-i V dt / 2 hbar) psi ] ]

    The kinetic factor is exact for every wavenumber of the grid lattice, so
    with V = 0 the step is the exact free propagator of the periodic grid.
    Phase factors are cached per step size (``spec.dt``, the shortened last
    step, a negative dt).

    Parameters
    ----------
    spec : bohmlib.propagator.PropagatorSpec

    verbose : boolean, default=False
        Whether to log progress messages.
    """
    def __init__(self, spec, verbose=False):
        super().__init__(spec, verbose)
        self._k2 = spec.grid.wavenumbers**2
        self._factors = {spec.dt: self._build_factors(spec.dt)}

    def _build_factors(self, dt):
        spec = self.spec
        half_potential = np.exp(-0.5j * dt / spec.hbar * spec.potential)
        kinetic = np.exp(-0.5j * spec.hbar * dt / spec.mass * self._k2)
        return half_potential, kinetic

    def step(self, w, dt=None):
        """Apply one Strang step.

        Parameters
        ----------
        w : bohmlib.grid.WaveSample

        dt : float, optional
            Defaults to ``spec.dt``.

        Returns
        -------
        bohmlib.grid.WaveSample

        Raises
        ------
        bohmlib.exceptions.GridMismatchError
            If ``w`` is not on ``spec.grid``.
        """
        self.check_grid(w)
        dt = self.spec.dt if dt is None else dt
        factors = self._factors.get(dt)
        if factors is None:
            factors = self._factors[dt] = self._build_factors(dt)
        half_potential, kinetic = factors
        if self.spec.is_free:
            values = np.fft.ifft(kinetic * np.fft.fft(w.values))
        else:
            values = half_potential * np.fft.ifft(kinetic * np.fft.fft(half_potential * w.values))
        return w.replace(values, t=w.t + dt)

    def run_backward(self, w, n_steps):
        """Take ``n_steps`` steps of ``-spec.dt``."""
        for _ in range(n_steps):
            w = self.step(w, -self.spec.dt)
        return w


def order_of_accuracy(dts, t_final=1.0, omega=1.0, x0=2.0, grid=None, hbar=1.0, mass=1.0):
    """Measure the order in dt of the split-operator global error.

    With V = 0 the step is exact, so the error is measured on a coherent
    state of the harmonic potential ``V = m omega^2 x^2 / 2``, which has a
    closed form at every time. The error at ``t_final`` is the L2 distance
    to the closed form, minimized over a global phase.

    Parameters
    ----------
    dts : sequence of float
        Steps to compare, e.g. successive halvings.

    t_final : float, default=1

    omega : float, default=1

    x0 : float, default=2
        Initial displacement of the coherent state.

    grid : bohmlib.grid.GridSpec, optional
        Defaults to x in [-16, 16] with 256 points.

    Returns
    -------
    dict
        ``dts``, ``errors`` and ``order``, the slope of log(error) against
        log(dt).
    """
    grid = GridSpec(-16.0, 16.0, 256) if grid is None else grid
    potential = harmonic_potential(grid, omega, mass)
    w0 = coherent_state(grid, 0.0, omega, x0, hbar=hbar, mass=mass)
    exact = coherent_state(grid, t_final, omega, x0, hbar=hbar, mass=mass)
    errors = []
    for dt in dts:
        propagator = SplitOperator(PropagatorSpec(grid, dt, potential, hbar=hbar, mass=mass))
        final = propagator.advance(w0, t_final)
        errors.append(phase_aligned_l2_distance(final.values, exact.values, grid.spacing))
    order = float("nan")
    if len(dts) > 1:
        order = float(linregress(np.log(dts), np.log(errors)).slope)
    return {"dts": list(dts), "errors": errors, "order": order}
