from typing import NamedTuple, Optional, Sequence
import numpy as np
import pandas as pd
from enum import Enum
from scipy.special import ndtri
from scipy.stats import qmc
from lyacert.expr import Expression, evaluate, gradient, hessian

A_GOZLAN = 23 / 27
DEFAULT_SHELLS = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 1000.0)


class ConditionVerdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class ConditionCheck(NamedTuple):
    liminf: float
    verdict: ConditionVerdict
    R: Optional[float]
    shells: pd.DataFrame

    @property
    def passed(self) -> bool:
        return self.verdict == ConditionVerdict.PASS

    def to_dict(self):
        return {
            "liminf": self.liminf,
            "verdict": self.verdict.value,
            "R": self.R,
            "shells": self.shells.to_dict(orient="list"),
        }


def condition_value(V: Expression, x, m: Optional[int] = None, a: float = A_GOZLAN):
    """
    `sum_i (a (d_i V)^2 - d_ii V) / (1 + x_i^2)` at a point or a batch of shape `(m, n)`.
    """
    points = np.asarray(x, dtype=float)
    if points.ndim == 0:
        points = points.reshape(1)
    m = points.shape[0] if m is None else m
    grad, hess = gradient(V, m), hessian(V, m)
    total = 0.0
    for i in range(m):
        first = evaluate(grad[i], points)
        second = evaluate(hess[i][i], points)
        total = total + (a * first * first - second) / (1 + points[i] ** 2)
    return total


def directions(m: int, count: int = 256) -> np.ndarray:
    """
    Unit directions of shape `(m, n)`: the signed coordinate axes followed by
    `count` Halton points pushed through the normal quantile and normalized.
    """
    axes = np.concatenate([np.eye(m), -np.eye(m)], axis=1)
    if m == 1 or count == 0:
        return axes
    sampler = qmc.Halton(d=m, scramble=False)
    sampler.fast_forward(1)
    normal = ndtri(sampler.random(count)).T
    return np.concatenate([axes, normal / np.linalg.norm(normal, axis=0)], axis=1)


def check_condition(
    V: Expression,
    m: int,
    shells: Sequence[float] = DEFAULT_SHELLS,
    count: int = 256,
    a: float = A_GOZLAN,
    outer: int = 2,
    tol: float = 1e-9,
) -> ConditionCheck:
    """
    Estimate `liminf_{|x| -> inf}` of `condition_value` and compare it with `m`.

    The estimate is the smallest value over the directions on the `outer`
    outermost shells. When the shell minima over the last `outer + 1` shells
    are not monotone the verdict is inconclusive. `R` is the smallest shell
    radius from which on every shell minimum is at least `m`.

    Parameters
    ----------
    shells : `Sequence[float]`, optional (default = `DEFAULT_SHELLS`)
        Increasing radii.
    count : `int`, optional (default = `256`)
        Number of low-discrepancy directions added to the axes.
    """
    radii = np.asarray(shells, dtype=float)
    units = directions(m, count)
    minima = np.array([np.min(condition_value(V, r * units, m=m, a=a)) for r in radii])
    liminf = float(np.min(minima[-outer:]))
    steps = np.diff(minima[-(outer + 1):])
    scale = tol * np.maximum(1.0, np.abs(minima[-outer:]))
    monotone = np.all(steps >= -scale) or np.all(steps <= scale)
    if not monotone:
        verdict = ConditionVerdict.INCONCLUSIVE
    elif liminf >= m - tol:
        verdict = ConditionVerdict.PASS
    else:
        verdict = ConditionVerdict.FAIL
    R = None
    if verdict == ConditionVerdict.PASS:
        holding = minima >= m - tol
        first = len(radii)
        while first > 0 and holding[first - 1]:
            first -= 1
        R = float(radii[first])
    table = pd.DataFrame({"radius": radii, "minimum": minima})
    return ConditionCheck(liminf, verdict, R, table)
