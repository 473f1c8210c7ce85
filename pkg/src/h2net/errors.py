"""Exception hierarchy shared by every h2net module."""


class H2NetError(Exception):
    """Base class for all errors raised by h2net."""


class DimensionMismatch(H2NetError, ValueError):
    pass


class SingularMatrix(H2NetError, ArithmeticError):
    pass


class ConvergenceFailure(H2NetError, ArithmeticError):
    pass


class NotHurwitz(H2NetError, ValueError):
    """Raised when a computation needs a stable state matrix and did not get one."""


class SingularOperator(H2NetError, ArithmeticError):
    """The Lyapunov operator turned out singular although the Hurwitz test passed."""


class UnsupportedKind(H2NetError, ValueError):
    pass


class NotFirstOrder(H2NetError, ValueError):
    pass


class Divergence(H2NetError, ArithmeticError):
    pass


class GridMismatch(H2NetError, ValueError):
    pass


class ParseError(H2NetError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(ParseError):
    pass
