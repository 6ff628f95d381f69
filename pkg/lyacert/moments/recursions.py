from typing import List
import math
import numpy as np
from fractions import Fraction
from lyacert.moments.errors import MomentBoundError

EPS = np.finfo(float).eps


def round_up(value: Fraction) -> float:
    """Smallest double not below `value` (`inf` past the double range)."""
    try:
        result = float(value)
    except OverflowError:
        return math.inf
    if Fraction(result) < value:
        result = float(np.nextafter(result, math.inf))
    return result


def log_up(value: Fraction) -> float:
    """Upper estimate of `log(value)` that works far beyond the double range."""
    if value <= 0:
        return -math.inf
    a, b = math.log(value.numerator), math.log(value.denominator)
    return a - b + 4 * EPS * (abs(a) + abs(b) + 1)


def sqrt_up(value: Fraction) -> Fraction:
    """Dyadic upper bound of `sqrt(value)`; exact when the root is a double."""
    root = math.sqrt(float(value))
    while Fraction(root) ** 2 < value:
        root = float(np.nextafter(root, math.inf))
    return Fraction(root)


def inv_sqrt_up(value: Fraction) -> Fraction:
    """Dyadic upper bound of `1 / sqrt(value)`."""
    root = 1 / math.sqrt(float(value))
    while Fraction(root) ** 2 * value < 1:
        root = float(np.nextafter(root, math.inf))
    return Fraction(root)


def _validate(c: float, b: float, n_max: int) -> None:
    if not c > 0:
        raise MomentBoundError(f"Moment recursions need c > 0, got c = {c!r}.")
    if not b >= 0:
        raise MomentBoundError(f"Moment recursions need b >= 0, got b = {b!r}.")
    if n_max < 1:
        raise MomentBoundError(f"nMax must be at least 1, got {n_max}.")


def recursion_sequence(c: float, b: float, n_max: int) -> List[Fraction]:
    """
    Exact rational bounds on `beta_n = int d^{2n} dmu` from the weighted Poincare inequality:
    `beta_1 <= b / c` and `beta_n <= ((n - 1)^2 / c) beta_{n-2} + (b / c) beta_{n-1}`.
    """
    _validate(c, b, n_max)
    c, b = Fraction(c), Fraction(b)
    sequence = [Fraction(1), b / c]
    for n in range(2, n_max + 1):
        sequence.append((n - 1) ** 2 / c * sequence[n - 2] + b / c * sequence[n - 1])
    return sequence[: n_max + 1]


def chain_sequence(c: float, b: float, n_max: int) -> List[Fraction]:
    """One-step chain `beta_n <= (b / c + n / sqrt(c)) beta_{n-1}` from the Holder step."""
    _validate(c, b, n_max)
    inv_root = inv_sqrt_up(Fraction(c))
    c, b = Fraction(c), Fraction(b)
    sequence = [Fraction(1)]
    for n in range(1, n_max + 1):
        sequence.append((b / c + n * inv_root) * sequence[n - 1])
    return sequence


def gozlan_sequence(lambda1p: float, lambda2p: float, n_max: int) -> List[Fraction]:
    """
    Bounds from `beta_n <= l1 n^2 beta_{n-2} + l2 beta_{n-1}` with `l1 = lambda1'`
    and `l2 = lambda2'`.

    The recursion has no start at `n = 1`; `beta_1 <= sqrt(beta_2)` turns the
    `n = 2` step into `s^2 - l2 s - 4 l1 <= 0` for `s = sqrt(beta_2)`, whose root
    bounds both `beta_1 = s` and `beta_2 = s^2`. Every term is then the minimum
    of the recursion and the chain `beta_n <= (l2 + sqrt(l1) (n + 1)) beta_{n-1}`.
    """
    if not lambda1p > 0:
        raise MomentBoundError(f"Gozlan recursion needs lambda1' > 0, got {lambda1p!r}.")
    if not lambda2p >= 0:
        raise MomentBoundError(f"Gozlan recursion needs lambda2' >= 0, got {lambda2p!r}.")
    if n_max < 2:
        raise MomentBoundError(f"nMax must be at least 2, got {n_max}.")
    l1, l2 = Fraction(lambda1p), Fraction(lambda2p)
    root = sqrt_up(l1)
    s = (l2 + sqrt_up(l2 * l2 + 16 * l1)) / 2
    sequence = [Fraction(1)]
    for n in range(1, n_max + 1):
        chain = (l2 + root * (n + 1)) * sequence[n - 1]
        if n <= 2:
            candidate = s ** n
        else:
            candidate = l1 * n * n * sequence[n - 2] + l2 * sequence[n - 1]
        sequence.append(min(candidate, chain))
    return sequence


def to_floats(sequence: List[Fraction]) -> np.ndarray:
    return np.array([round_up(value) for value in sequence])


def to_logs(sequence: List[Fraction]) -> np.ndarray:
    return np.array([log_up(value) for value in sequence])


def recursion_bounds(c: float, b: float, n_max: int) -> np.ndarray:
    return to_floats(recursion_sequence(c, b, n_max))


def chain_bounds(c: float, b: float, n_max: int) -> np.ndarray:
    return to_floats(chain_sequence(c, b, n_max))


def gozlan_recursion_bounds(lambda1p: float, lambda2p: float, n_max: int) -> np.ndarray:
    return to_floats(gozlan_sequence(lambda1p, lambda2p, n_max))
