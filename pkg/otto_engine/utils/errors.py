"""
Error Types
===========
Exception hierarchy shared by every otto_engine module.

All library errors derive from OttoEngineError so callers (the CLI in
particular) can map them to exit codes in one place.
"""

from typing import Any, List, Optional


class OttoEngineError(Exception):
    """Base class for all otto_engine errors."""


class InvalidInputError(OttoEngineError, ValueError):
    """Input violates a documented precondition (non-finite, non-unitary, ...)."""


class UndefinedResultError(OttoEngineError, ArithmeticError):
    """The requested quantity is undefined at this parameter point."""


class PreconditionError(OttoEngineError):
    """Operation only valid in a restricted regime (e.g. adiabatic driving)."""


class ConfigError(OttoEngineError):
    """Run configuration cannot be used."""


class SupportViolationError(OttoEngineError):
    """
    Sampled efficiency values fall outside the exact support.

    This is a correctness signal, not a statistical fluctuation.
    """

    def __init__(self, message: str, offending: Optional[List[Any]] = None):
        super().__init__(message)
        self.offending = list(offending or [])

    def to_dict(self) -> dict:
        """Diagnostic payload for reports."""
        return {"error": str(self), "offending": [str(v) for v in self.offending]}


class CheckFailedError(OttoEngineError):
    """A validation check or statistical test failed; the report is attached."""

    def __init__(self, message: str, report: Optional[dict] = None):
        super().__init__(message)
        self.report = report or {}
