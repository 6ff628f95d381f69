from typing import NamedTuple, Tuple, Union
import numpy as np
from functools import lru_cache
from lyacert.expr import Expression, evaluate, parse

Real = Union[float, np.ndarray]


class OmegaProperties(NamedTuple):
    omega_prime_at_0: float
    sup_ratio: float
    M: float
    u: float


def omega(t: Real) -> Real:
    """`omega(t) = (t / 2) sqrt(1 + t^2) + log|t + sqrt(1 + t^2)| / 2`."""
    t = np.asarray(t, dtype=float)
    value = t / 2 * np.sqrt(1 + t * t) + np.arcsinh(t) / 2
    return float(value) if value.ndim == 0 else value


@lru_cache(maxsize=None)
def omega_expression() -> Expression:
    return parse("x1 / 2 * sqrt(1 + x1^2) + log(x1 + sqrt(1 + x1^2)) / 2", 1)


def omega_ratio(t: Real) -> Real:
    """`|omega''' / omega'^3|(t)` from the symbolic derivatives."""
    first = omega_expression().differentiate(1)
    third = first.differentiate(1).differentiate(1)
    points = np.asarray(t, dtype=float).reshape(1, -1)
    ratio = np.abs(evaluate(third, points) / evaluate(first, points) ** 3)
    return float(ratio[0]) if np.ndim(t) == 0 else ratio


def omega_props(span: float = 50.0, n: int = 100001) -> OmegaProperties:
    """
    `omega'(0)` and `sup_t |omega''' / omega'^3|` on `[-span, span]`.

    `M = 1` and `u = 1` are the constants of the cost for this `omega`.
    """
    first = omega_expression().differentiate(1)
    ratio = omega_ratio(np.linspace(-span, span, n))
    return OmegaProperties(
        omega_prime_at_0=evaluate(first, [0.0]), sup_ratio=float(np.max(ratio)), M=1.0, u=1.0
    )


def d_omega(x, y) -> float:
    """`(sum_i |omega(x_i) - omega(y_i)|^2)^(1/2)`."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return float(np.sqrt(np.sum((omega(x) - omega(y)) ** 2)))


def cutoff_phi(s: Real, r: float, N: float) -> Tuple[Real, Real]:
    """
    `C^1` cutoff equal to `1` below `r`, `0` above `r + N` and the cubic
    `2u^3 - 3u^2 + 1`, `u = (s - r) / N`, in between. Returns the value and the derivative.
    """
    s = np.asarray(s, dtype=float)
    u = np.clip((s - r) / N, 0.0, 1.0)
    value = 2 * u ** 3 - 3 * u ** 2 + 1
    derivative = (6 * u * u - 6 * u) / N
    if s.ndim == 0:
        return float(value), float(derivative)
    return value, derivative


def cutoff_derivative_bound(N: float) -> float:
    return 3 / (2 * N)
