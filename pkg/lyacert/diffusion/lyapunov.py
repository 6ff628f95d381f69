from typing import List, NamedTuple, Optional, Sequence, Tuple
import math
import numpy as np
import pandas as pd
from loguru import logger
from lyacert.expr import Expression, evaluate, gradient
from lyacert.oracle import OracleReport, expectation
from lyacert.errors import OracleError
from lyacert.diffusion.errors import LyapunovPreconditionError
from lyacert.diffusion.problem import DiffusionProblem, GridSpec, LyapunovConstants, u_form


class Violation(NamedTuple):
    point: Tuple[float, ...]
    defect: float

    def to_dict(self):
        return {"point": list(self.point), "defect": self.defect}


def generator_apply(p: DiffusionProblem, W: Expression, x: Sequence[float]) -> float:
    return evaluate(p.generator(W), x)


def lyapunov_defect(
    p: DiffusionProblem, W: Expression, k: LyapunovConstants, x: Sequence[float]
) -> float:
    """`LW(x) - (-c d^2(x, x0) + b) W(x)`; the condition holds at `x` iff it is `<= 0`."""
    w = evaluate(W, x)
    if w < 1:
        raise LyapunovPreconditionError(x, w)
    return generator_apply(p, W, x) - (-k.c * p.distance_sq(x) + k.b) * w


def check_U_form(
    p: DiffusionProblem, U: Expression, k: LyapunovConstants, x: Sequence[float]
) -> float:
    """`LU(x) + |grad U(x)|^2 + c d^2(x, x0) - b`; the condition holds at `x` iff it is `<= 0`."""
    return evaluate(u_form(p.V, p.m, U), x) + k.c * p.distance_sq(x) - k.b


def defect_profile(
    p: DiffusionProblem, W: Expression, k: LyapunovConstants, points: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized defects and values of `W` on a batch of points."""
    w = evaluate(W, points)
    low = np.flatnonzero(w < 1)
    if low.size:
        raise LyapunovPreconditionError(points[:, low[0]], float(w[low[0]]))
    lw = evaluate(p.generator(W), points)
    return lw - (-k.c * p.distance_sq(points) + k.b) * w, w


def scan_defect(
    p: DiffusionProblem,
    W: Expression,
    k: LyapunovConstants,
    grid: GridSpec,
    tol: float = 1e-9,
) -> List[Violation]:
    """Grid points where the defect exceeds `tol * max(1, W)`."""
    points = grid.points(p.m)
    defect, w = defect_profile(p, W, k, points)
    bad = np.flatnonzero(defect > tol * np.maximum(1.0, w))
    return [Violation(tuple(points[:, i].tolist()), float(defect[i])) for i in bad]


def remark_scan(
    p: DiffusionProblem,
    U: Expression,
    k: LyapunovConstants,
    radii: Sequence[float] = (10.0, 100.0, 1000.0),
) -> pd.DataFrame:
    """
    Evaluate `check_U_form` along the ray `x0 + r e_1` and measure its growth.

    The exponent column is the local log-log slope between consecutive radii.
    A positive value at the largest radius means the `U` form of the Lyapunov
    condition fails far out; this is logged as a discrepancy, not raised.
    """
    rows = []
    for radius in radii:
        point = np.asarray(p.x0, dtype=float)
        point[0] += radius
        rows.append({"radius": radius, "value": check_U_form(p, U, k, point)})
    table = pd.DataFrame(rows)
    magnitude = np.log(np.abs(table["value"].to_numpy()))
    exponents = np.diff(magnitude) / np.diff(np.log(table["radius"].to_numpy()))
    table["exponent"] = np.concatenate([[math.nan], exponents])
    table["sign"] = np.sign(table["value"])
    if table["value"].iloc[-1] > 0:
        logger.bind(discrepancy="u_form_growth").warning(
            f"LU + |grad U|^2 + c d^2 - b is positive at |x - x0| = {radii[-1]} "
            f"and grows with exponent {table['exponent'].iloc[-1]:.3f}: "
            "the U form of the Lyapunov condition fails for this pair."
        )
    return table


class PoincareResidual(NamedTuple):
    lhs: float
    rhs: float

    def holds(self, tol: float = 1e-6) -> bool:
        return self.lhs <= self.rhs + tol


def weighted_poincare_residual(
    p: DiffusionProblem,
    h: Expression,
    k: LyapunovConstants,
    radius: float = 40.0,
    seed: Optional[int] = None,
) -> PoincareResidual:
    """
    Both sides of the weighted Poincare inequality

        int h^2 d^2 dmu <= (1 / c) int |grad h|^2 dmu + (b / c) int h^2 dmu

    computed by the quadrature oracle (Metropolis for `m >= 3`).
    """
    grad_h = gradient(h, p.m)

    def h_sq(points: np.ndarray) -> np.ndarray:
        return evaluate(h, points) ** 2

    def h_sq_dist(points: np.ndarray) -> np.ndarray:
        return h_sq(points) * p.distance_sq(points)

    def grad_sq(points: np.ndarray) -> np.ndarray:
        return sum(evaluate(partial, points) ** 2 for partial in grad_h)

    reports = [
        expectation(p.V, f, m=p.m, x0=p.x0, radius=radius, seed=seed)
        for f in (h_sq_dist, grad_sq, h_sq)
    ]
    _check_reports(reports)
    moment, energy, mass = (report.value for report in reports)
    return PoincareResidual(lhs=moment, rhs=energy / k.c + k.b / k.c * mass)


def _check_reports(reports: List[OracleReport]) -> None:
    for report in reports:
        if not math.isfinite(report.value):
            raise OracleError(f"Oracle returned a non-finite value with verdict {report.verdict}.")
