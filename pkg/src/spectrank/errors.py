"""Exception and warning types shared across the package."""


class RankingError(Exception):
    """Base class for every error raised by spectrank."""


class InputError(RankingError, ValueError):
    """Malformed input: unparsable files, bad weights, invalid parameters."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NumericalError(RankingError, ArithmeticError):
    """A method cannot produce a score vector for this input.

    Raised for divergent series, undefined normalizations and
    singular systems.
    """


class RankingWarning(UserWarning):
    """Advisory diagnostic (non-uniqueness, reducibility, slow convergence)."""
