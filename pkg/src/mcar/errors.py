"""Exception types shared across the package."""


class DataError(ValueError):
    """Invalid user-supplied data (bad candidate sets, malformed files, ...).

    ``line`` is set when the error originates from a parsed file.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GenerationError(RuntimeError):
    """Synthetic data generation could not satisfy its constraints."""


class SolverDivergenceError(RuntimeError):
    """A solve produced non-finite iterates. Carries the failing iteration."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration
