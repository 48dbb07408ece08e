""" Propagator Module.
This module provides the run specification of a numerical evolution and a
basic propagator class that can be extended to implement an integration
scheme for the time-dependent Schrodinger equation ::

        i hbar d psi/dt = -(hbar^2 / 2m) d^2 psi/dx^2 + V psi

by specifying the operations performed during each step.

The ``evolve`` method drives repeated steps and emits frames; the ``step``
method must be implemented.
"""
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from bohmlib.exceptions import GridMismatchError
from bohmlib.grid import GridSpec
from bohmlib.propagator.utils import time_steps

logger = logging.getLogger(__name__)

SCHEMES = ("split-operator",)


@dataclass(frozen=True, eq=False)
class PropagatorSpec:
    """Grid, step and potential of a numerical evolution.

    Parameters
    ----------
    grid : bohmlib.grid.GridSpec

    dt : float
        Time step, dt > 0.

    potential : array-like of float, shape (grid.n,), optional
        External potential V on the grid; zero if omitted.

    scheme : {'split-operator'}, default='split-operator'

    hbar : float, default=1

    mass : float, default=1
    """
    grid: GridSpec
    dt: float
    potential: np.ndarray = field(default=None, repr=False)
    scheme: str = "split-operator"
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        potential = np.zeros(self.grid.n) if self.potential is None else np.asarray(self.potential, dtype=float)
        violations = []
        if not (math.isfinite(self.dt) and self.dt > 0):
            violations.append("expected dt > 0 but got {}".format(self.dt))
        if potential.shape != (self.grid.n,):
            violations.append("expected a potential of shape ({},) but got {}".format(self.grid.n, potential.shape))
        elif not np.all(np.isfinite(potential)):
            violations.append("potential must be finite everywhere")
        if self.scheme not in SCHEMES:
            violations.append("unknown scheme '{}', expected one of {}".format(self.scheme, SCHEMES))
        if not (self.hbar > 0 and self.mass > 0):
            violations.append("expected hbar > 0 and mass > 0 but got {} and {}".format(self.hbar, self.mass))
        if violations:
            raise ValueError("Error when checking propagator spec: " + "; ".join(violations))
        potential.setflags(write=False)
        object.__setattr__(self, "potential", potential)

    @property
    def is_free(self):
        return not np.any(self.potential)


class Propagator(object):
    """This class implements the general propagator.
        It must be extended to be used, since method 'step' must be implemented.

    Parameters
    ----------
    spec : PropagatorSpec

    verbose : boolean, default=False
        Whether to log progress messages.

    Attributes
    ----------
    history : dict
        Filled by ``evolve`` with the keys ``t`` (emitted times), ``norm``
        (discrete norm of each emitted frame), ``steps`` and ``run_time``.
    """

    def __init__(self, spec, verbose=False):
        self.spec = spec
        self.verbose = verbose
        self.history = {"t": [], "norm": [], "steps": 0, "run_time": 0.0}
        self._params = {"scheme": spec.scheme,
                        "dt": spec.dt,
                        "grid": [spec.grid.x_min, spec.grid.x_max, spec.grid.n],
                        "free": spec.is_free,
                        "hbar": spec.hbar,
                        "mass": spec.mass}

    def get_params(self):
        """Returns the parameters of the propagator."""
        return dict(self._params)

    def check_grid(self, w):
        """Raise GridMismatchError if ``w`` is not on the spec grid."""
        if w.grid != self.spec.grid:
            raise GridMismatchError("Error when checking wave sample: expected grid {} but got {}".format(
                self.spec.grid, w.grid))

    def step(self, w, dt=None):
        """It must be implemented by the derived class.

        Parameters
        ----------
        w : bohmlib.grid.WaveSample
            Sample on ``spec.grid``.

        dt : float, optional
            Step to take instead of ``spec.dt``; may be negative to
            step backwards in time.

        Returns
        -------
        bohmlib.grid.WaveSample
            The sample at ``w.t + dt``.

        Raises
        ------
            NotImplementedError
        """
        raise NotImplementedError

    def advance(self, w0, t_final):
        """Step from ``w0.t`` to ``t_final`` and return the final sample only."""
        self.check_grid(w0)
        w = w0
        for dt in time_steps(w0.t, t_final, self.spec.dt):
            w = self.step(w, dt)
        return w.replace(w.values, t=t_final)

    def iter_evolve(self, w0, t_final, emit_every=1):
        """Generator form of ``evolve``: yields each frame as it is emitted,
        so long runs need not hold every frame in memory."""
        if int(emit_every) != emit_every or emit_every < 1:
            raise ValueError("Error when checking emit_every: expected an integer >= 1 but got {}".format(emit_every))
        self.check_grid(w0)
        steps = time_steps(w0.t, t_final, self.spec.dt)
        self.history = {"t": [w0.t], "norm": [w0.norm], "steps": len(steps), "run_time": 0.0}
        start_time = time.time()
        yield w0
        w = w0
        for index, dt in enumerate(steps, start=1):
            w = self.step(w, dt)
            last = index == len(steps)
            t = t_final if last else w0.t + index * self.spec.dt
            w = w.replace(w.values, t=t)
            if index % emit_every == 0 or last:
                self.history["t"].append(t)
                self.history["norm"].append(w.norm)
                self.history["run_time"] = time.time() - start_time
                if self.verbose:
                    logger.info("step: %d/%d - t: %.6g - norm drift: %.3e",
                                index, len(steps), t, w.norm - w0.norm)
                yield w

    def evolve(self, w0, t_final, emit_every=1):
        """Repeated steps from ``w0.t`` to ``t_final``.

        Frames are emitted at the step indices divisible by ``emit_every``
        (index 0 is the input frame) and always at ``t_final``. The last step
        is shortened so the run lands exactly on ``t_final``.

        Parameters
        ----------
        w0 : bohmlib.grid.WaveSample

        t_final : float
            Final time, t_final >= w0.t.

        emit_every : integer, default=1

        Returns
        -------
        list of bohmlib.grid.WaveSample
        """
        return list(self.iter_evolve(w0, t_final, emit_every))
