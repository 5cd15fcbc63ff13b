"""Exception types raised across the package."""


class PointFormatError(ValueError):
    """A point file or point literal could not be parsed.

    Carries the 1-based line number when the source is a file.
    """

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class SingularMatrixError(ValueError):
    """The similarity matrix is singular or numerically ill conditioned.

    ``condition`` holds the condition estimate that triggered the error
    (``math.inf`` for an exactly singular factorization).
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured subset budget."""

    def __init__(self, required, budget):
        super().__init__(
            f"enumeration of {required} subsets exceeds budget {budget}"
        )
        self.required = required
        self.budget = budget


class SeparationError(ValueError):
    """A separation certificate could not be established."""
