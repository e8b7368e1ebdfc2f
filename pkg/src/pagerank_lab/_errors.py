class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class FitError(ValueError):
    """A least-squares fit cannot be formed from the supplied data."""


class ConvergenceError(RuntimeError):
    """An iterative method hit its budget before meeting its stopping rule.

    The partial result and the run report are attached so callers can
    inspect how far the method got.
    """

    def __init__(self, message, result=None, report=None):
        super().__init__(message)
        self.result = result
        self.report = report
