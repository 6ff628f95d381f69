from typing import Any, Tuple, Union
import numpy as np
from functools import lru_cache
from abc import ABC, abstractmethod
from dataclasses import dataclass
from lyacert.expr.errors import ExpressionDomainError, NonSmoothError

Value = Union[float, np.ndarray]


class Expression(ABC):
    """
    Immutable node of a symbolic expression over variables `x1..xm`.

    Nodes are frozen dataclasses, so trees are hashable and can be shared
    between threads. Points passed to `evaluate` are indexed by `x[index - 1]`
    which makes the same tree work for a single point of shape `(m,)`
    and for a batch of points of shape `(m, n)`.
    """

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> Value:
        pass

    @abstractmethod
    def differentiate(self, index: int) -> "Expression":
        pass


@dataclass(frozen=True)
class Constant(Expression):
    value: float

    def evaluate(self, x: np.ndarray) -> Value:
        return self.value

    def differentiate(self, index: int) -> Expression:
        return ZERO

    def __str__(self) -> str:
        text = repr(float(self.value))
        return f"({text})" if text.startswith("-") else text


@dataclass(frozen=True)
class Variable(Expression):
    index: int

    def evaluate(self, x: np.ndarray) -> Value:
        return x[self.index - 1]

    def differentiate(self, index: int) -> Expression:
        return ONE if index == self.index else ZERO

    def __str__(self) -> str:
        return f"x{self.index}"


@dataclass(frozen=True)
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression

    def evaluate(self, x: np.ndarray) -> Value:
        left = self.left.evaluate(x)
        right = self.right.evaluate(x)
        if self.op == "+":
            return left + right
        if self.op == "-":
            return left - right
        if self.op == "*":
            return left * right
        if self.op == "/":
            if np.any(np.asarray(right) == 0):
                raise ExpressionDomainError(self, "Division by zero")
            return left / right
        if np.any((np.asarray(left) < 0) & (np.asarray(right) != np.round(right))):
            raise ExpressionDomainError(self, "Negative base with a non-integer exponent")
        if np.any((np.asarray(left) == 0) & (np.asarray(right) < 0)):
            raise ExpressionDomainError(self, "Zero base with a negative exponent")
        return np.power(left, right)

    def differentiate(self, index: int) -> Expression:
        left, right = self.left, self.right
        d_left = left.differentiate(index)
        d_right = right.differentiate(index)
        if self.op == "+":
            return add(d_left, d_right)
        if self.op == "-":
            return sub(d_left, d_right)
        if self.op == "*":
            return add(mul(d_left, right), mul(left, d_right))
        if self.op == "/":
            return sub(div(d_left, right), div(mul(left, d_right), mul(right, right)))
        # Power rule
        if isinstance(right, Constant):
            k = right.value
            return mul(mul(Constant(k), power(left, k - 1)), d_left)
        if is_constant(d_right, 0.0):
            return mul(mul(right, BinaryOp("^", left, sub(right, ONE))), d_left)
        return mul(
            self,
            add(mul(d_right, FunctionCall("log", left)), div(mul(right, d_left), left)),
        )

    def __str__(self) -> str:
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class FunctionCall(Expression):
    name: str
    arg: Expression

    def evaluate(self, x: np.ndarray) -> Value:
        value = self.arg.evaluate(x)
        if self.name == "exp":
            return np.exp(value)
        if self.name == "log":
            if np.any(np.asarray(value) <= 0):
                raise ExpressionDomainError(self, "Logarithm of a non-positive value")
            return np.log(value)
        if self.name == "sqrt":
            if np.any(np.asarray(value) < 0):
                raise ExpressionDomainError(self, "Square root of a negative value")
            return np.sqrt(value)
        if self.name == "abs":
            return np.abs(value)
        if self.name == "sgn":
            if np.any(np.asarray(value) == 0):
                raise NonSmoothError(self, "Derivative of `abs` evaluated at its kink")
            return np.sign(value)
        return -value

    def differentiate(self, index: int) -> Expression:
        d_arg = self.arg.differentiate(index)
        if self.name == "exp":
            return mul(self, d_arg)
        if self.name == "log":
            return div(d_arg, self.arg)
        if self.name == "sqrt":
            return div(d_arg, mul(Constant(2.0), self))
        if self.name == "abs":
            return mul(FunctionCall("sgn", self.arg), d_arg)
        if self.name == "sgn":
            # Zero almost everywhere, still undefined at the kink.
            return mul(BinaryOp("*", ZERO, self), d_arg)
        return negate(d_arg)

    def __str__(self) -> str:
        if self.name == "neg":
            return f"(-{self.arg})"
        return f"{self.name}({self.arg})"


FUNCTIONS = ("exp", "log", "sqrt", "abs", "sgn", "neg")
ZERO = Constant(0.0)
ONE = Constant(1.0)


def is_constant(expression: Expression, value: float) -> bool:
    return isinstance(expression, Constant) and expression.value == value


def add(left: Expression, right: Expression) -> Expression:
    if is_constant(left, 0.0):
        return right
    if is_constant(right, 0.0):
        return left
    if isinstance(left, Constant) and isinstance(right, Constant):
        return Constant(left.value + right.value)
    return BinaryOp("+", left, right)


def sub(left: Expression, right: Expression) -> Expression:
    if is_constant(right, 0.0):
        return left
    if is_constant(left, 0.0):
        return negate(right)
    if isinstance(left, Constant) and isinstance(right, Constant):
        return Constant(left.value - right.value)
    return BinaryOp("-", left, right)


def mul(left: Expression, right: Expression) -> Expression:
    if is_constant(left, 0.0) or is_constant(right, 0.0):
        return ZERO
    if is_constant(left, 1.0):
        return right
    if is_constant(right, 1.0):
        return left
    if isinstance(left, Constant) and isinstance(right, Constant):
        return Constant(left.value * right.value)
    return BinaryOp("*", left, right)


def div(left: Expression, right: Expression) -> Expression:
    if is_constant(right, 1.0):
        return left
    if is_constant(left, 0.0):
        return ZERO
    if isinstance(left, Constant) and isinstance(right, Constant) and right.value != 0:
        return Constant(left.value / right.value)
    return BinaryOp("/", left, right)


def power(base: Expression, exponent: float) -> Expression:
    if exponent == 1:
        return base
    if exponent == 0:
        return ONE
    return BinaryOp("^", base, Constant(float(exponent)))


def negate(expression: Expression) -> Expression:
    if isinstance(expression, Constant):
        return Constant(-expression.value)
    if isinstance(expression, FunctionCall) and expression.name == "neg":
        return expression.arg
    return FunctionCall("neg", expression)


def evaluate(expression: Expression, x: Any) -> Value:
    """
    Evaluate `expression` at a point or at a batch of points.

    Parameters
    ----------
    expression : `Expression`, required
        Tree to evaluate.
    x : `Any`, required
        Point of shape `(m,)` (a scalar is treated as a 1-D point)
        or a batch of shape `(m, n)`.

    Returns
    -------
    `float` for a single point, `np.ndarray` of shape `(n,)` for a batch.
    """
    point = np.asarray(x, dtype=float)
    if point.ndim == 0:
        point = point.reshape(1)
    with np.errstate(all="ignore"):
        value = expression.evaluate(point)
    if point.ndim == 1:
        return float(value)
    return np.array(np.broadcast_to(np.asarray(value, dtype=float), point.shape[1:]))


@lru_cache(maxsize=None)
def gradient(expression: Expression, m: int) -> Tuple[Expression, ...]:
    return tuple(expression.differentiate(index) for index in range(1, m + 1))


@lru_cache(maxsize=None)
def hessian(expression: Expression, m: int) -> Tuple[Tuple[Expression, ...], ...]:
    return tuple(gradient(partial, m) for partial in gradient(expression, m))


@lru_cache(maxsize=None)
def laplacian(expression: Expression, m: int) -> Expression:
    result = ZERO
    for index, partial in enumerate(gradient(expression, m), start=1):
        result = add(result, partial.differentiate(index))
    return result
