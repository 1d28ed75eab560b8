from collections.abc import Sequence


# EXCEPTIONS
class GramstabException(Exception):
    pass


class InputError(GramstabException, ValueError):
    pass


class ConsistencyError(GramstabException):
    pass


class ConvergenceError(GramstabException):
    """
    Raised by the root finder when the residual target is not reached.
    The best iterates found so far travel with the exception.
    """

    def __init__(
        self,
        message: str,
        best_iterates: Sequence[complex] = (),
        residuals: Sequence[float] = (),
    ):
        super().__init__(message)
        self.best_iterates = tuple(best_iterates)
        self.residuals = tuple(residuals)
