from .claims import CLAIMS
from .report import EvidenceRow, VerificationReport, exit_code

__all__ = ["CLAIMS", "EvidenceRow", "VerificationReport", "exit_code"]
