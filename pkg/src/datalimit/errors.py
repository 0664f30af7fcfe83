"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class DataLimitError(Exception):
    """Base class for all errors raised by :mod:`datalimit`."""


class ModelError(DataLimitError, ValueError):
    """Invalid link budget, mobility profile or evaluation argument."""


class HypothesisError(ModelError):
    """A closed form was asked to evaluate outside the domain where it holds."""


class ConvergenceError(DataLimitError, ArithmeticError):
    """Numerical iteration stopped before reaching its tolerance.

    The best available estimate is attached so callers can still report it.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class InfeasibleError(DataLimitError, ValueError):
    """A planning target cannot be met under the requested constraints."""
