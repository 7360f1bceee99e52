"""Exception hierarchy shared by all stratix modules.

Every error carries a machine-readable ``code`` so the HTTP service and the
CLI can map failures without string matching.
"""

from __future__ import annotations


class StratixError(Exception):
    """Base class; ``code`` identifies the failure kind, ``detail`` is free-form."""

    code = "error"

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_payload(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}


class ParseError(StratixError):
    """Malformed input file (expression matrix, clinical table, feature list)."""

    code = "parse_error"


class ValidationError(StratixError):
    """A precondition or invariant was violated by otherwise well-formed input."""

    code = "validation_error"


class PhaseError(StratixError):
    """Workflow call made out of order (e.g. clustering before feature selection)."""

    code = "phase_violation"


class NotFoundError(StratixError):
    """Unknown session, view, or selection name."""

    code = "not_found"
