"""
Error types

All failures raised by the numerical services derive from RecoveryError so the
API and the CLI can translate them in one place.
"""
from typing import Optional


class RecoveryError(Exception):
    """Base class for errors raised by the recovery pipeline"""


class DomainError(RecoveryError, ValueError):
    """An argument lies outside the mathematical domain of an operation"""


class ParameterError(RecoveryError, ValueError):
    """An algorithm parameter violates its precondition"""


class SingularityError(RecoveryError):
    """A matrix is (numerically) rank deficient"""

    def __init__(self, message: str, smallest: float, rank: Optional[int] = None):
        super().__init__(message)
        self.smallest = smallest
        self.rank = rank


class GuaranteeError(RecoveryError):
    """A subsample does not satisfy the lower frame bound inequality"""

    def __init__(self, message: str, margin: float, tolerance: float):
        super().__init__(message)
        self.margin = margin
        self.tolerance = tolerance
