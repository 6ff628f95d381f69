from typing import Any


class CertificationError(Exception):
    """Base error for every failure surfaced by lyacert."""

    def __init__(self, message: Any) -> None:
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return repr(self.message)


class DeltaRejectedError(CertificationError):
    """Requested exponent lies outside the admissible range."""

    def __init__(self, delta: float, threshold: float, reason: str) -> None:
        super().__init__(f"delta = {delta!r} rejected: {reason} (threshold {threshold!r}).")
        self.delta = delta
        self.threshold = threshold


class OracleError(CertificationError):
    pass
