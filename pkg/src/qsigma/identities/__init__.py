"""Registry of verified identities and the verification engine."""

from .catalog import get_record, registry
from .engine import (
    FAIL,
    PASS,
    PRECONDITION,
    Summary,
    VerificationReport,
    verify_all,
    verify_formal,
    verify_numeric,
)
from .records import Constraint, IdentityRecord, ParameterSpec

__all__ = [
    "registry", "get_record", "verify_formal", "verify_numeric", "verify_all",
    "VerificationReport", "Summary", "IdentityRecord", "ParameterSpec", "Constraint",
    "PASS", "FAIL", "PRECONDITION",
]
