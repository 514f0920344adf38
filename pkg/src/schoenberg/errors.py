"""Exception hierarchy shared by all modules."""


class SchoenbergError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SchoenbergError, ValueError):
    """An input violates a documented precondition."""


class ParseError(ValidationError):
    """A file or specification string could not be parsed.

    ``line`` is the 1-based line number for file input, ``None`` otherwise.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(SchoenbergError):
    """Base for failures of a numerical procedure on valid input."""


class ConvergenceError(NumericalError):
    pass


class NotEuclideanError(NumericalError):
    """The matrix of scalar products has a significantly negative eigenvalue."""

    def __init__(self, eigenvalue, message=None):
        self.eigenvalue = float(eigenvalue)
        if message is None:
            message = (
                f"matrix is not a squared Euclidean distance: "
                f"eigenvalue {self.eigenvalue:.6g} below tolerance"
            )
        super().__init__(message)


class SingularCovarianceError(NumericalError):
    """Sample covariance is rank deficient; ``directions`` holds the null directions as rows."""

    def __init__(self, message, directions):
        self.directions = directions
        super().__init__(message)


class NonRectifiableError(ValidationError):
    pass


class UndefinedAngleError(ValidationError):
    pass


class InternalError(SchoenbergError):
    """A post-condition guaranteed by theory failed; indicates a bug."""
