import math

import numpy as np

from bohmlib.metrics import second_central_moment


def time_steps(t0, t1, dt):
    """Step sizes that take ``t0`` to ``t1`` with steps of ``dt``.

    Every step is ``dt`` except the last one, which is shortened so that
    the run lands exactly on ``t1``.

    Parameters
    ----------
    t0 : float

    t1 : float
        Final time, t1 >= t0.

    dt : float
        Nominal step, dt > 0.

    Returns
    -------
    list of float
        Empty when ``t1 == t0``.
    """
    if not dt > 0:
        raise ValueError("Error when checking time step: expected dt > 0 but got {}".format(dt))
    if t1 < t0:
        raise ValueError("Error when checking times: expected t_final >= {} but got {}".format(t0, t1))
    span = t1 - t0
    if span == 0:
        return []
    n_steps = max(1, math.ceil(span / dt - 1e-9))
    last = span - (n_steps - 1) * dt
    return [dt] * (n_steps - 1) + [last]


def time_grid(t0, t1, dt):
    """Times visited by ``time_steps``, endpoints included.

    Intermediate times are ``t0 + k*dt`` (not accumulated sums) and the last
    one is exactly ``t1``.
    """
    steps = time_steps(t0, t1, dt)
    times = t0 + dt * np.arange(len(steps) + 1, dtype=float)
    times[-1] = t1
    return times


def mean_momentum(w, hbar=1.0):
    """First moment of the momentum-space density ``|FFT(psi)|^2``."""
    weights = np.abs(np.fft.fft(w.values))**2
    return float(hbar * np.sum(w.grid.wavenumbers * weights) / np.sum(weights))


def width(w):
    """Square root of the second central moment of ``|psi|^2``."""
    return math.sqrt(second_central_moment(w.x, np.abs(w.values)**2))


def emission_times(t0, t1, dt, emit_every=1):
    """Times of the frames ``Propagator.evolve`` emits: ``t0 + index*dt`` for
    the step indices divisible by ``emit_every``, and always ``t1``."""
    n_steps = len(time_steps(t0, t1, dt))
    indices = list(range(0, n_steps + 1, emit_every))
    if indices[-1] != n_steps:
        indices.append(n_steps)
    times = t0 + dt * np.array(indices, dtype=float)
    times[-1] = t1
    return times
