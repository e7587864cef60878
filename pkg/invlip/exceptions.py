"""
Exception types raised by invlip.

Every error the library raises on purpose derives from InvlipError so that
the command-line interface can map it onto an exit status.
"""
from __future__ import annotations

from typing import Any, Optional


class InvlipError(Exception):
    """Base class for all invlip errors."""


class DomainError(InvlipError, ValueError):
    """An argument lies outside the domain an operation supports."""


class BiInvarianceError(DomainError):
    """
    The metric failed the right-invariance check on the scanned ball.

    Parameters
    ----------
    witness : tuple
        The triple (g, h, k) with d(gk, hk) != d(g, h).
    """
    def __init__(self, message: str, witness: tuple):
        super().__init__(message)
        self.witness = witness


class ResourceError(InvlipError):
    """An enumeration exceeded its configured cap."""
    def __init__(self, message: str, cap: int):
        super().__init__(f'{message} (cap={cap})')
        self.cap = cap


class PreconditionError(InvlipError):
    """A documented precondition of an operation does not hold."""


class ScopeError(InvlipError):
    """Exact computation was requested where only ball scans are possible."""


class ValidationError(InvlipError):
    """
    An instance failed validation.

    Parameters
    ----------
    failed : list of str
        The names of the axioms that did not hold.
    """
    def __init__(self, failed: list[str]):
        super().__init__('Failed axioms: ' + ', '.join(failed))
        self.failed = list(failed)


class UnboundedNormError(InvlipError):
    """Two points at pseudo-distance zero carry different values."""


class InstanceError(InvlipError):
    """
    An instance file could not be parsed.

    Parameters
    ----------
    message : str
        What went wrong.
    field : str, optional
        Dotted path of the offending field.
    """
    def __init__(self, message: str, field: Optional[str] = None):
        if field:
            message = f'{field}: {message}'
        super().__init__(message)
        self.field = field


class CertificationError(InvlipError):
    """A bound that should have been certified was violated."""
    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
