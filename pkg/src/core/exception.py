"""
Custom exceptions for clear error handling
"""
from typing import Any


class BaseAppException(Exception):
    """Base exception for all simulator errors"""

    exit_code: int = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ConfigurationError(BaseAppException):
    """Raised when a scenario cannot be set up as configured"""
    exit_code = 2


class DomainError(BaseAppException):
    """Raised when an input lies outside the physical or mathematical domain"""
    exit_code = 3


class NumericalError(BaseAppException):
    """Raised when a numerical routine fails to converge"""
    exit_code = 4


class CutoffError(BaseAppException):
    """Raised when a Fock-space truncation loses too much probability"""
    exit_code = 5


class SweepError(BaseAppException):
    """Raised when a power point of a sweep fails"""
    exit_code = 6
