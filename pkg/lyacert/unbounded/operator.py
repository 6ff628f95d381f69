from typing import List, NamedTuple, Sequence, Tuple, Union
import numpy as np
import pandas as pd
from scipy.ndimage import maximum_filter
from lyacert.expr import Constant, Expression, FunctionCall, Variable, evaluate
from lyacert.expr.nodes import add, div, negate, power, sub
from lyacert.errors import OracleError
from lyacert.oracle import expectation
from lyacert.diffusion import (
    GridSpec,
    LyapunovConstants,
    LyapunovPreconditionError,
    Violation,
    fit_from_profile,
)
from lyacert.unbounded.problem import UnboundedProblem

Sample = Union[GridSpec, np.ndarray]
DEFAULT_BUMPS = ((0.0, 0.5), (1.0, 0.5), (-1.5, 0.3), (0.5, 1.0), (2.0, 0.7))
SUPPORT_MARGIN = 1e-9


def drift_from_A_V(p: UnboundedProblem, i: int) -> Expression:
    """Symbolic drift component `b^i` that makes `mu` invariant for `L_a`."""
    return p.drift[i - 1]


def generator_a_apply(p: UnboundedProblem, W: Expression, x: Sequence[float]) -> float:
    return evaluate(p.generator(W), x)


def lambda_max_values(p: UnboundedProblem, points: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of `A` on a batch of points, after a positive-definiteness check."""
    points = np.asarray(points, dtype=float).reshape(p.m, -1)
    values = p.matrix_values(points)
    p.check_positive_definite(points, values)
    if p.m == 1:
        return values[:, 0, 0]
    if p.m == 2:
        a, b, d = values[:, 0, 0], values[:, 0, 1], values[:, 1, 1]
        return (a + d) / 2 + np.hypot((a - d) / 2, b)
    return np.linalg.eigvalsh(values)[:, -1]


def lambda_max(p: UnboundedProblem, x: Sequence[float]) -> float:
    return float(lambda_max_values(p, np.asarray(x, dtype=float).reshape(p.m, 1))[0])


class LambdaMaxEnvelope(NamedTuple):
    points: np.ndarray
    pointwise: np.ndarray
    conservative: np.ndarray


def lambda_max_envelope(p: UnboundedProblem, grid: GridSpec) -> LambdaMaxEnvelope:
    """`lambda_max` per grid node and its maximum over the neighbouring nodes."""
    points = grid.points(p.m)
    pointwise = lambda_max_values(p, points)
    shaped = pointwise.reshape((grid.n,) * p.m)
    conservative = maximum_filter(shaped, size=3, mode="nearest").reshape(-1)
    return LambdaMaxEnvelope(points, pointwise, conservative)


class UnboundedVerification(NamedTuple):
    passed: bool
    max_defect: float
    violations: List[Violation]


def _sample_points(p: UnboundedProblem, sample: Sample) -> np.ndarray:
    if isinstance(sample, GridSpec):
        return sample.points(p.m)
    return np.asarray(sample, dtype=float).reshape(p.m, -1)


def unbounded_defect(
    p: UnboundedProblem, W: Expression, k: LyapunovConstants, sample: Sample
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """`L_a W - (-c d^2 + b) lambda_max W` on the sample, with the sample points and `W`."""
    points = _sample_points(p, sample)
    w = evaluate(W, points)
    low = np.flatnonzero(w < 1)
    if low.size:
        raise LyapunovPreconditionError(points[:, low[0]], float(w[low[0]]))
    rate = -k.c * p.distance_sq(points) + k.b
    defect = evaluate(p.generator(W), points) - rate * lambda_max_values(p, points) * w
    return defect, points, w


def verify_unbounded_lyapunov(
    p: UnboundedProblem,
    W: Expression,
    k: LyapunovConstants,
    sample: Sample,
    tol: float = 1e-9,
) -> UnboundedVerification:
    defect, points, w = unbounded_defect(p, W, k, sample)
    bad = np.flatnonzero(defect > tol * np.maximum(1.0, w))
    violations = [Violation(tuple(points[:, i].tolist()), float(defect[i])) for i in bad]
    return UnboundedVerification(not violations, float(np.max(defect)), violations)


def bump(p: UnboundedProblem, center: float, width: float) -> Expression:
    """
    Compact bump `exp(-1 / (1 - s))` with `s = |x - x0 - center e_1|^2 / width^2`.
    The expression is the bump on `s < 1` only; it vanishes with all derivatives outside.
    """
    square = None
    for index in range(1, p.m + 1):
        shift = p.x0[index - 1] + (center if index == 1 else 0.0)
        term = power(sub(Variable(index), Constant(shift)), 2)
        square = term if square is None else add(square, term)
    inside = sub(Constant(1.0), div(square, Constant(width * width)))
    return FunctionCall("exp", negate(div(Constant(1.0), inside)))


def invariance_check(
    p: UnboundedProblem,
    bumps: Sequence[Tuple[float, float]] = DEFAULT_BUMPS,
    radius: float = 40.0,
) -> pd.DataFrame:
    """
    `int L_a f dmu` for compact bumps `f`; it vanishes when `mu` is invariant.
    The numerator is integrated over the support of each bump, so `m <= 2`.

    Parameters
    ----------
    bumps : `Sequence[Tuple[float, float]]`, optional (default = `DEFAULT_BUMPS`)
        Pairs of (offset along the first axis, support radius).
    """
    if p.m > 2:
        raise OracleError(f"Invariance check needs quadrature, got dimension m = {p.m}.")
    rows = []
    for center, width in bumps:
        base = list(p.x0)
        base[0] += center
        report = expectation(
            p.V,
            p.generator(bump(p, center, width)),
            m=p.m,
            x0=base,
            radius=radius,
            inner_radius=width * (1 - SUPPORT_MARGIN),
        )
        rows.append(
            {
                "center": center,
                "width": width,
                "value": report.value,
                "error": report.error_estimate,
            }
        )
    return pd.DataFrame(rows)


def fit_unbounded_constants(
    p: UnboundedProblem, W: Expression, grid: GridSpec, tol: float = 1e-9
) -> Tuple[LyapunovConstants, UnboundedVerification]:
    """Fit `(c, b)` in `L_a W <= (-c d^2 + b) lambda_max W` on the grid and verify them."""
    points = grid.points(p.m)
    w = evaluate(W, points)
    low = np.flatnonzero(w < 1)
    if low.size:
        raise LyapunovPreconditionError(points[:, low[0]], float(w[low[0]]))
    g = evaluate(p.generator(W), points) / (lambda_max_values(p, points) * w)
    constants = fit_from_profile(g, p.distance_sq(points), points, tol=tol)
    return constants, verify_unbounded_lyapunov(p, W, constants, grid, tol=tol)
