"""Exceptions Module.

Domain errors that callers (and the command line) need to tell apart.
Every class extends a built-in exception so that plain ``except ValueError``
keeps working.
"""


class ConfigError(ValueError):
    """Raised when a run configuration violates one or more constraints.

    Parameters
    ----------
    violations : list of str
        Every violated constraint, one message each.
    """
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("Invalid configuration ({} violation(s)):\n  - {}".format(
            len(self.violations), "\n  - ".join(self.violations)))


class GridMismatchError(ValueError):
    """Raised when two samples or frames are not on the same grid."""


class NotFringedError(ValueError):
    """Raised when a density frame shows fewer than three interference maxima."""


class EnsembleAbortError(RuntimeError):
    """Raised when more than the tolerated fraction of trajectories aborted.

    Parameters
    ----------
    report : dict
        Abort report with the keys ``count``, ``aborted``, ``fraction`` and
        ``diagnostics``.
    """
    def __init__(self, report):
        self.report = report
        super().__init__("{} of {} trajectories aborted ({:.2%})".format(
            report["aborted"], report["count"], report["fraction"]))
