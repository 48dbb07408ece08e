"""Config Module.

A single run configuration, loaded from JSON, overridden from the command
line and validated in one pass that reports every violation.
"""
import math
from dataclasses import dataclass, asdict, fields

from bohmlib.exceptions import ConfigError
from bohmlib.grid import GridSpec
from bohmlib.model import TwoSlitParams
from bohmlib.trajectories.sampler import MODES as SAMPLER_MODES
from bohmlib.utils.io_utils import load_json

RUN_MODES = ("analytic", "numeric")
Q_FORMS = ("dynamical", "density")


@dataclass(frozen=True)
class RunConfig:
    """Parameters of one run, defaults from the two-slit experiment.

    Parameters
    ----------
    hbar, mass, sigma0, d : float
        Model parameters (1, 1, 0.5, 10).

    x_min, x_max, n : grid
        Periodic grid, [-128, 128) with 8192 points.

    t_final, dt, emit_every : time
        Final time, propagator step and frame cadence in steps (10, 1e-3,
        1000: frames at t = 0, 1, ..., 10).

    traj_dt : float
        Trajectory step (1e-2).

    count, sampler_mode, seed, stratified : sampler
        200 quantile positions, seed 0 for seeded-random draws.

    mode : {'analytic', 'numeric'}
        Source of the wavefunction.

    raw : boolean
        Sample the unnormalized closed form (the bare sum of the two
        packets) for field frames; analytic mode only. Velocities and Q do
        not depend on it.

    initial_state : string
        CSV of ``x, re, im`` rows on the configured grid to propagate instead
        of the two-packet state; numeric mode only.

    out : string
        Output directory.

    node_eps : float
        Node threshold, relative to the peak density (1e-12).

    q_form : {'dynamical', 'density'}
        Form of the quantum potential written to field frames.

    regime_low, regime_high : float
        Visibility thresholds of the regime classification (0.01, 0.9).
    """
    hbar: float = 1.0
    mass: float = 1.0
    sigma0: float = 0.5
    d: float = 10.0
    x_min: float = -128.0
    x_max: float = 128.0
    n: int = 8192
    t_final: float = 10.0
    dt: float = 1e-3
    emit_every: int = 1000
    traj_dt: float = 1e-2
    count: int = 200
    sampler_mode: str = "quantile"
    seed: int = 0
    stratified: bool = False
    mode: str = "analytic"
    raw: bool = False
    initial_state: str = ""
    out: str = "out"
    node_eps: float = 1e-12
    q_form: str = "dynamical"
    regime_low: float = 0.01
    regime_high: float = 0.9

    def __post_init__(self):
        violations = self.violations()
        if violations:
            raise ConfigError(violations)

    def violations(self):
        """Returns the list of every violated constraint."""
        found = TwoSlitParams.violations(self.hbar, self.mass, self.sigma0, self.d)
        found += GridSpec.violations(self.x_min, self.x_max, self.n)
        if not (math.isfinite(self.t_final) and self.t_final >= 0):
            found.append("expected t_final >= 0 but got {}".format(self.t_final))
        if not (math.isfinite(self.dt) and self.dt > 0):
            found.append("expected dt > 0 but got {}".format(self.dt))
        if self.emit_every < 1:
            found.append("expected emit_every >= 1 but got {}".format(self.emit_every))
        if not (math.isfinite(self.traj_dt) and self.traj_dt > 0):
            found.append("expected traj_dt > 0 but got {}".format(self.traj_dt))
        elif self.mode == "numeric" and self.dt > 0 and abs(self.traj_dt / self.dt - round(self.traj_dt / self.dt)) > 1e-9:
            found.append("numeric mode needs traj_dt to be a multiple of dt but got traj_dt={}, dt={}".format(
                self.traj_dt, self.dt))
        if self.count < 1:
            found.append("expected count >= 1 but got {}".format(self.count))
        if self.sampler_mode not in SAMPLER_MODES:
            found.append("unknown sampler_mode '{}', expected one of {}".format(self.sampler_mode, SAMPLER_MODES))
        if self.mode not in RUN_MODES:
            found.append("unknown mode '{}', expected one of {}".format(self.mode, RUN_MODES))
        elif self.initial_state and self.mode != "numeric":
            found.append("initial_state needs mode 'numeric' but got mode '{}'".format(self.mode))
        elif self.raw and self.mode != "analytic":
            found.append("raw needs mode 'analytic' but got mode '{}'".format(self.mode))
        if not self.node_eps > 0:
            found.append("expected node_eps > 0 but got {}".format(self.node_eps))
        if self.q_form not in Q_FORMS:
            found.append("unknown q_form '{}', expected one of {}".format(self.q_form, Q_FORMS))
        if not 0 < self.regime_low < self.regime_high:
            found.append("expected 0 < regime_low < regime_high but got {} and {}".format(
                self.regime_low, self.regime_high))
        if not self.out:
            found.append("expected a non-empty output directory")
        return found

    @property
    def params(self):
        return TwoSlitParams(self.hbar, self.mass, self.sigma0, self.d)

    @property
    def grid(self):
        return GridSpec(self.x_min, self.x_max, self.n)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
        """Build a config from a dict, coercing each value to its field type.

        Raises
        ------
        bohmlib.exceptions.ConfigError
            Listing unknown keys, values that cannot be coerced and every
            violated constraint.
        """
        if not isinstance(values, dict):
            raise ConfigError(["expected a mapping of config fields but got {}".format(type(values).__name__)])
        types = {f.name: f.type for f in fields(cls)}
        coerced, errors = {}, []
        for key, value in values.items():
            if key not in types:
                errors.append("unknown key '{}'".format(key))
                continue
            try:
                coerced[key] = _coerce(value, types[key])
            except (TypeError, ValueError, OverflowError):
                errors.append("cannot read {}={!r} as {}".format(key, value, types[key].__name__))
        try:
            config = cls(**coerced)
        except ConfigError as e:
            raise ConfigError(errors + e.violations)
        if errors:
            raise ConfigError(errors)
        return config

    @classmethod
    def from_file(cls, path):
        return cls.from_dict(load_json(path))

    def with_overrides(self, assignments):
        """Apply ``key=value`` strings on top of this config.

        Parameters
        ----------
        assignments : sequence of str

        Returns
        -------
        RunConfig
        """
        values = self.to_dict()
        errors = []
        for assignment in assignments:
            key, sep, value = assignment.partition("=")
            if not sep:
                errors.append("expected key=value but got '{}'".format(assignment))
                continue
            values[key.strip()] = value.strip()
        if errors:
            raise ConfigError(errors)
        return type(self).from_dict(values)


def _coerce(value, kind):
    if kind is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ValueError(value)
    if kind is int:
        if isinstance(value, bool):
            raise TypeError(value)
        number = float(value)
        if number != int(number):
            raise ValueError(value)
        return int(number)
    if kind is float:
        if isinstance(value, bool):
            raise TypeError(value)
        return float(value)
    return str(value)
