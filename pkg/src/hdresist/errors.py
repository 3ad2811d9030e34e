"""Exception hierarchy shared by all modules."""


class HDResistError(Exception):
    """Base class for every error raised by this package."""


class InputError(HDResistError, ValueError):
    """Bad user-supplied data. The CLI maps these to exit code 1."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(InputError):
    pass


class UnknownEdge(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InvalidPerturbation(InputError):
    """Some weight of x + dx is not strictly positive."""


class NotConnected(InputError):
    pass


class SameVertex(InputError):
    pass


class ZeroCurrent(InputError):
    pass


class NonInvertible(HDResistError, ZeroDivisionError):
    pass


class NumericalError(HDResistError, ArithmeticError):
    """Numerical failure. The CLI maps these to exit code 2."""


class NonFinite(NumericalError):
    pass


class NegativeEigenvalue(NumericalError):
    pass


class NonZeroRowSums(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class BoundViolation(NumericalError):
    pass
