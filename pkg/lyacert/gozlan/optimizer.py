from typing import NamedTuple, Optional
import math
import numpy as np
import pandas as pd
from loguru import logger
from scipy.optimize import minimize_scalar
from lyacert.gozlan.errors import GozlanConstraintError
from lyacert.gozlan.condition import A_GOZLAN
from lyacert.gozlan.constants import GozlanParameters, OMEGA_CONSTANT, eps1_cap


class OptimizedParameters(NamedTuple):
    eps1: float
    eps3: float
    delta: float
    closed_form: float
    trace: pd.DataFrame

    def to_dict(self):
        return {
            "eps1": self.eps1,
            "eps3": self.eps3,
            "delta": self.delta,
            "closed_form": self.closed_form,
        }


def closed_form_delta(m: int) -> float:
    """`2 (sqrt(m) - sqrt(m - 1)) / (3 sqrt(3 m))`."""
    return 2 * (math.sqrt(m) - math.sqrt(m - 1)) / (3 * math.sqrt(3 * m))


def limit_delta(eps1, m: int, a: float = A_GOZLAN):
    """`(lambda1 m)^(-1/2)` in the limit `eps = eps2 = 0`, with `eps3 = 1 - a - eps1`."""
    eps1 = np.asarray(eps1, dtype=float)
    eps3 = 1 - a - eps1
    with np.errstate(divide="ignore", invalid="ignore"):
        pole = np.zeros_like(eps1) if m == 1 else OMEGA_CONSTANT * (m - 1) / eps3
        product = eps1 * (m - pole) / m
    value = np.where((eps1 > 0) & (eps3 > 0) & (product > 0), np.sqrt(np.abs(product)), 0.0)
    return float(value) if value.ndim == 0 else value


def optimize_parameters(
    m: int, a: float = A_GOZLAN, points: int = 10 ** 4, agreement: float = 1e-4
) -> OptimizedParameters:
    """
    Maximize the admissible exponent over `eps1` in the limit configuration `eps = eps2 = 0`.

    A grid of `points` values of `eps1` up to its cap is refined by a bounded scalar
    search around the best node. For `a = 23/27` the optimum is compared with the
    closed form and a disagreement beyond `agreement` is logged.
    """
    if m < 1:
        raise GozlanConstraintError("dimension", f"m = {m} must be at least 1.")
    cap = eps1_cap(m, a)
    if not cap > 0:
        raise GozlanConstraintError("eps1_cap", f"no eps1 below the cap {cap!r} for a = {a!r}.")
    grid = np.linspace(0.0, cap, points + 1)[1:]
    deltas = limit_delta(grid, m, a)
    best = int(np.argmax(deltas))
    result = minimize_scalar(
        lambda eps1: -limit_delta(eps1, m, a),
        bounds=(grid[max(best - 1, 0)], grid[min(best + 1, points - 1)]),
        method="bounded",
        options={"xatol": 1e-12},
    )
    eps1 = float(result.x) if -result.fun >= deltas[best] else float(grid[best])
    delta = limit_delta(eps1, m, a)
    closed = closed_form_delta(m) if a == A_GOZLAN else math.nan
    if math.isfinite(closed) and abs(delta - closed) > agreement:
        logger.bind(discrepancy="gozlan_optimizer").warning(
            f"Optimized delta {delta!r} differs from the closed form {closed!r} for m = {m}."
        )
    trace = pd.DataFrame({"eps1": grid, "delta": deltas})
    return OptimizedParameters(eps1, 1 - a - eps1, delta, closed, trace)


def default_parameters(
    m: int,
    R: float,
    a: float = A_GOZLAN,
    eps: float = 1e-3,
    eps2: float = 1e-3,
    eps1: Optional[float] = None,
    shrink: float = 0.999,
) -> GozlanParameters:
    """
    Strictly feasible parameters near the optimum of `optimize_parameters`.

    `eps1` defaults to the optimizer's value, pulled by `shrink` inside both its
    cap and the budget left after `eps2`; `eps3` takes the rest of the budget.
    """
    if eps1 is None:
        eps1 = optimize_parameters(m, a=a).eps1
    budget = 1 - a - 3 * eps2
    eps1 = min(eps1, shrink * eps1_cap(m, a), shrink * budget)
    return GozlanParameters(m=m, eps=eps, eps1=eps1, eps2=eps2, eps3=budget - eps1, R=R, a=a)
