"""Exception hierarchy shared across the package.

Validation failures (bad parameter domains) and numerical-integrity
failures (results outside provable tolerances) are distinct: the CLI
maps them to different exit codes.
"""


class BisupError(Exception):
    """Base class for all package errors."""


class ValidationError(BisupError):
    """A parameter violates its domain. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalIntegrityError(BisupError):
    """A computed value is inconsistent beyond rounding tolerance."""


class CancellationError(NumericalIntegrityError):
    """Signed log-sum-exp lost all significant digits."""
