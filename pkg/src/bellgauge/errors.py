"""Exception hierarchy. ``exit_code`` is the CLI status for each failure."""


class BellGaugeError(Exception):
    exit_code = 1


class ValidationError(BellGaugeError, ValueError):
    """A matrix or parameter set failed a state invariant."""

    exit_code = 2

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class NotHermitian(ValidationError):
    pass


class TraceInvalid(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NonUnitVector(ValidationError):
    pass


class NotXState(ValidationError):
    pass


class InfeasibleParams(ValidationError):
    pass


class NonRealCorrelation(ValidationError):
    pass


class NoConvergence(BellGaugeError, ArithmeticError):
    pass


class NoRoot(BellGaugeError, ArithmeticError):
    exit_code = 2


class ParseError(BellGaugeError):
    exit_code = 3


class EmptyGrid(BellGaugeError):
    exit_code = 4


class SearchExhausted(BellGaugeError):
    """Raised when the counterexample search hits its evaluation cap.

    ``best`` holds the highest-scoring record seen, for diagnosis.
    """

    exit_code = 5

    def __init__(self, message, best=None, found=()):
        super().__init__(message)
        self.best = best
        self.found = list(found)


class OutputError(BellGaugeError):
    exit_code = 6
