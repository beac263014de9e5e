"""
Exception hierarchy for the synthesizer and verifier
"""

from typing import Any, Dict, Optional


class CrsError(Exception):
    """Base class for every error raised by crsynth"""

    exit_code = 1


class InvalidInputError(CrsError):
    """Malformed alphabet, DFA, system or word"""


class PreconditionError(CrsError):
    """An operation was called outside its precondition"""


class VerificationError(CrsError):
    """A constructed system failed verification"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class ResourceCapError(CrsError):
    """A configured cap was exceeded; carries the stage that hit it"""

    exit_code = 2

    def __init__(self, stage: str, cap: int, count: int, details: Optional[Dict[str, Any]] = None):
        self.stage = stage
        self.cap = cap
        self.count = count
        self.details = dict(details or {})
        message = f"{stage}: cap {cap} exceeded after {count}"
        if self.details:
            extra = ", ".join(f"{key}={value}" for key, value in self.details.items())
            message = f"{message} ({extra})"
        super().__init__(message)


class GcdObstructionError(CrsError):
    """The kernel weights share a prime factor, so no equal-weight representatives exist"""

    def __init__(self, gcd: int, prime: int):
        self.gcd = gcd
        self.prime = prime
        super().__init__(f"kernel weight gcd is {gcd}; Z/{prime}Z is a quotient of the image group")
