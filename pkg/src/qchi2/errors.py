"""Exception hierarchy shared by all modules."""


class QChi2Error(Exception):
    """Base class for errors raised by qchi2."""


class DomainError(QChi2Error, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularStateError(QChi2Error, ValueError):
    """A state that must be positive definite has an eigenvalue below the floor."""

    def __init__(self, message, min_eigenvalue=None, floor=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.floor = floor


class NumericError(QChi2Error, ArithmeticError):
    """A numerical routine failed (e.g. eigensolver non-convergence)."""

    def __init__(self, message, norm=None):
        super().__init__(message)
        self.norm = norm
