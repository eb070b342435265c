"""Exception hierarchy shared by all modules."""


class RitzError(Exception):
    """Base class for every error raised by this package."""


class NoSignChange(RitzError, ValueError):
    """A bracket does not enclose a sign change."""


class ToleranceNotMet(RitzError):
    """Adaptive quadrature ran out of subdivisions."""


class StepUnderflow(RitzError):
    """ODE step size collapsed, usually at a pole or blow-up.

    Attributes
    ----------
    t : float
        Time at which the integrator gave up.
    """

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class NotInvertible(RitzError, ValueError):
    """Series reversion requested on a series with c0 != 0 or c1 == 0."""


class NonConvergence(RitzError):
    """A special-function series hit its term cap before converging."""


class NoConvergence(RitzError):
    """Newton iteration for a stationary point hit its iteration cap."""


class SingularHessian(RitzError):
    """Hessian of the action is singular (fold point)."""


class NoSolution(RitzError):
    """No branch exists at the requested parameter."""


class RatioOutOfRange(RitzError, ValueError):
    """Partial-time ratio admits no real reaction order."""


class BranchCrossing(RitzError):
    """Transformed Lambert solution left the positive branch."""
