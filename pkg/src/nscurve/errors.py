"""Exception hierarchy shared across the package."""


class NSCurveError(Exception):
    """Base class for all package errors."""


class DomainError(NSCurveError, ValueError):
    """A point lies outside the declared domain of a field or model."""


class EvaluationError(NSCurveError, ArithmeticError):
    """An evaluation produced a non-finite or undefined intermediate."""


class StepFailure(NSCurveError, RuntimeError):
    """The ODE integrator could not make progress (step size underflow)."""


class DomainExit(StepFailure, DomainError):
    """The integrator stalled because trial stages left the domain."""


class InsufficientData(NSCurveError, ValueError):
    pass


class ParameterError(NSCurveError, ValueError):
    """A parameter combination makes a closed form undefined."""


class ConfigError(NSCurveError, ValueError):
    pass
