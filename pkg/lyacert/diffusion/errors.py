from typing import Sequence
from lyacert.errors import CertificationError


class InvalidConstantsError(CertificationError):
    pass


class LyapunovPreconditionError(CertificationError):
    """Candidate Lyapunov function drops below 1."""

    def __init__(self, point: Sequence[float], value: float) -> None:
        super().__init__(f"W(x) = {value!r} < 1 at x = {list(point)!r}; W >= 1 is required.")
        self.point = tuple(point)
        self.value = value


class LyapunovFitError(CertificationError):
    def __init__(self, worst_point: Sequence[float], reason: str) -> None:
        super().__init__(f"{reason} (worst sample point x = {list(worst_point)!r}).")
        self.worst_point = tuple(worst_point)
