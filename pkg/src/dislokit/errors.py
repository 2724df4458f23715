"""Exception types. Each carries the CLI exit code it maps to."""


class DislokitError(Exception):
    exit_code = 1


class ConfigError(DislokitError, ValueError):
    exit_code = 2


class DislocationCenterHit(DislokitError, ValueError):
    """A lattice site (or loop segment) lies on top of a dislocation center."""

    exit_code = 3

    def __init__(self, message, *, center=None, site=None):
        super().__init__(message)
        self.center = center
        self.site = site


class UnsupportedLattice(DislokitError, ValueError):
    exit_code = 4


class HypothesisViolated(DislokitError, ValueError):
    """Dipole routines need rho*a > 2|y0| so the cores stay outside the region."""

    exit_code = 5


class StepTooCoarse(DislokitError, ValueError):
    exit_code = 6

    def __init__(self, message, *, step=None):
        super().__init__(message)
        self.step = step
