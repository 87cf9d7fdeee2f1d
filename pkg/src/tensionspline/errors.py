"""Exception hierarchy shared by all modules."""


class TensionSplineError(Exception):
    """Base class for every error raised by this package."""


# expression language


class ExprSyntaxError(TensionSplineError, ValueError):
    """Malformed expression text.

    Carries the character offset and a description of what the parser
    expected at that point.
    """

    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownIdentifier(ExprSyntaxError):
    """An identifier that is neither a variable, a constant nor a function."""


class EvalError(TensionSplineError, ArithmeticError):
    """Evaluation produced a non-finite or undefined value."""


# problems


class InvalidProblem(TensionSplineError, ValueError):
    pass


class UnknownProblem(TensionSplineError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class MissingExact(TensionSplineError, ValueError):
    pass


class ProblemFileError(TensionSplineError, ValueError):
    pass


# discretisation


class InvalidParams(TensionSplineError, ValueError):
    pass


class NonPositiveTension(InvalidParams):
    pass


class LengthMismatch(TensionSplineError, ValueError):
    pass


class MeshTooSmall(TensionSplineError, ValueError):
    pass


class OutOfDomain(TensionSplineError, ValueError):
    pass


class IndexOutOfRange(TensionSplineError, IndexError):
    pass


# linear algebra


class SolverError(TensionSplineError, ArithmeticError):
    pass


class ZeroPivot(SolverError):
    def __init__(self, row, pivot):
        self.row = row
        self.pivot = pivot
        super().__init__(f"zero pivot {pivot!r} in row {row}")


class SingularMatrix(SolverError):
    pass


class SystemTooLarge(TensionSplineError, ValueError):
    pass


# analysis


class NonPositiveError(TensionSplineError, ValueError):
    pass
