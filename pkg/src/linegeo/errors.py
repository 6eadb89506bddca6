"""Exception types shared across the package."""


class LineGeoError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LineGeoError, ValueError):
    """Input outside an operation's domain (non-finite, wrong range,
    mismatched base points, inconsistent initial data)."""


class ChartExitError(DomainError):
    """The result leaves the stereographic chart: a rotation sends the
    direction to the south pole, or |xi| overflows the chart bound."""


class DegeneracyError(DomainError):
    """Evaluation requested on the equator |xi| = 1, where the induced
    metric on a twisting sphere degenerates."""


class NoOrbitError(DomainError):
    """No real radial motion exists: the integral ratio I1/I2^2 lies
    below the minimum of the effective potential."""


class ConvergenceError(LineGeoError, RuntimeError):
    """An iterative evaluation (series summation, root bracketing) did
    not converge within its configured budget."""
