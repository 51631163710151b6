"""
Exception hierarchy shared by every module.

All errors derive from ValueError so callers that already guard
against bad input with ``except ValueError`` keep working.
"""

from typing import Optional


class HcseError(ValueError):
    pass


class GraphParseError(HcseError):
    """Malformed edge-list input; carries the offending line number"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class DomainError(HcseError):
    """Input is well-formed but outside an operation's domain"""


class TreeIntegrityError(HcseError):
    """Cluster-tree topology or cache violation"""


class DocumentError(HcseError):
    """Tree document or spec file does not match its schema"""


class EnumerationLimitError(DomainError):
    """Oracle asked to enumerate beyond its bounds"""
