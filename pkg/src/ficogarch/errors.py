"""Exception and warning types raised by the toolkit."""


class FicogarchError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSpecError(FicogarchError, ValueError):
    """A process, kernel or model specification violates its invariants."""


class GridError(FicogarchError, ValueError):
    """A time grid is degenerate or incompatible with the requested operation."""


class JumpOutsideGridError(GridError):
    pass


class SingularPointError(FicogarchError, ValueError):
    """A kernel was evaluated at one of its singular points."""


class DivergesError(FicogarchError, ArithmeticError):
    """The requested kernel integral does not exist."""


class ToleranceNotMetError(FicogarchError, ArithmeticError):
    """Quadrature finished but its error estimate exceeds the requested tolerance."""


class HorizonTooShortError(FicogarchError, ValueError):
    pass


class KernelGridIncompatibleError(FicogarchError, ValueError):
    pass


class CumulantUnavailableError(FicogarchError, ValueError):
    pass


class MomentConditionError(FicogarchError, ValueError):
    pass


class OrderConstraintError(InvalidSpecError):
    pass


class InsufficientDataError(FicogarchError, ValueError):
    """Too few observations (series length or ensemble size) for an estimator."""


class ZeroVarianceError(FicogarchError, ValueError):
    pass


class NegativeVolatilityWarning(UserWarning):
    """Raised (as a warning) when a COGARCH(p,q)-type variance path goes non-positive."""


class LagBelowOneError(FicogarchError, ValueError):
    """Increment covariances are only derived for lags h >= 1."""


class OffGridLagError(GridError):
    pass


class UnknownSuiteError(FicogarchError, ValueError):
    pass


class NonPositiveDataError(FicogarchError, ValueError):
    """Log-log regression received a zero or negative value."""
