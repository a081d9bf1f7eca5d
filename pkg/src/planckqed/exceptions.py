"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(RuntimeError):
    """A numerical procedure exhausted its budget before meeting tolerance.

    The best available estimate is kept on the exception so callers can
    decide whether it is good enough.
    """

    def __init__(self, message, estimate=None, error_estimate=None, evaluations=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class IntegrationError(RuntimeError):
    """Time integration produced a non-finite state."""

    def __init__(self, message, step):
        super().__init__(f"{message} (step {step})")
        self.step = step
