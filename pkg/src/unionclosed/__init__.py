"""Workbench for union-closed set families."""
from .errors import FamilyError, PreconditionError, ProvenStatementViolation
from .family import SetFamily

__all__ = ["SetFamily", "FamilyError", "PreconditionError", "ProvenStatementViolation"]
__version__ = "0.1.0"
