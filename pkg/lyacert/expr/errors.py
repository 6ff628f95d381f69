from typing import Any
from lyacert.errors import CertificationError


class ExpressionError(CertificationError):
    pass


class ExpressionSyntaxError(ExpressionError):
    def __init__(self, message: str, text: str, position: int) -> None:
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class UnknownIdentifierError(ExpressionError):
    def __init__(self, name: str, position: int) -> None:
        super().__init__(f"Unknown identifier `{name}` at position {position}.")
        self.name = name
        self.position = position


class VariableIndexError(ExpressionError):
    def __init__(self, index: int, m: int) -> None:
        super().__init__(f"Variable x{index} is out of range for dimension m = {m}.")
        self.index = index
        self.m = m


class ExpressionDomainError(ExpressionError):
    """Evaluation left the domain of `log`, `sqrt`, `/` or `^` at some node."""

    def __init__(self, node: Any, reason: str) -> None:
        super().__init__(f"{reason} in `{node}`.")
        self.node = node


class NonSmoothError(ExpressionDomainError):
    """A derivative of `abs` was evaluated at its kink."""
