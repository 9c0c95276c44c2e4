"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: usage/validation problems -> 1,
data-format problems -> 2, numerical failures -> 3.
"""


class SacsimError(Exception):
    """Base class for all toolkit-specific errors."""


class ValidationError(SacsimError, ValueError):
    """Invalid argument or configuration value."""


class DegenerateRotationError(ValidationError):
    """Rotation angle too close to pi for a well-defined log map."""


class DataFormatError(SacsimError):
    """Malformed input file (CSV, WAV, manifest, model file)."""


class NumericalError(SacsimError):
    """A numerical procedure failed."""


class DivergenceError(NumericalError):
    """Integration produced non-finite values.

    Carries the step index at which the first non-finite entry appeared.
    """

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class NonConvergenceError(NumericalError):
    """Iterative solver ran out of iterations.

    Carries the best residual norm seen so the caller can report partial
    progress.
    """

    def __init__(self, message: str, best_residual: float | None = None):
        super().__init__(message)
        self.best_residual = best_residual


class IllConditionedError(NumericalError):
    """Matrix factorization failed even after jitter escalation."""
