"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NamrError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NamrError, ValueError):
    """An argument lies outside the domain of a formula."""


class StructuralError(NamrError, ValueError):
    """Shapes, dimensions or symmetry of inputs do not agree."""


class FitError(DomainError):
    pass


class ConfigError(NamrError, ValueError):
    """Invalid run configuration. ``key`` names the offending field when known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class NumericalError(NamrError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    pass


class InstabilityError(NumericalError):
    """The dynamical matrix has a non-positive eigenvalue."""

    def __init__(self, message: str, mode_index: int):
        super().__init__(message)
        self.mode_index = mode_index


class UnschedulableError(NumericalError):
    """A pair coupling cannot be realised with a positive duration."""

    def __init__(self, message: str, link: int):
        super().__init__(message)
        self.link = link
