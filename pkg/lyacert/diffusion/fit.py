from typing import List, Optional, Tuple
import math
import numpy as np
from loguru import logger
from lyacert.expr import Expression, evaluate
from lyacert.diffusion.errors import LyapunovFitError, LyapunovPreconditionError
from lyacert.diffusion.problem import (
    DiffusionProblem,
    GridSpec,
    LyapunovConstants,
    WeakLyapunovConstants,
)
from lyacert.diffusion.lyapunov import Violation, scan_defect

C_GRID = np.logspace(-8, 4, 121)


def fit_from_profile(
    g: np.ndarray,
    d2: np.ndarray,
    points: np.ndarray,
    tol: float = 1e-9,
    c_grid: np.ndarray = C_GRID,
    rounds: int = 3,
    outer_fraction: float = 0.9,
) -> LyapunovConstants:
    """
    Fit `(c, b)` such that `g <= -c d^2 + b` on the sample.

    A rate `c` is accepted when `g + c d^2` does not reach its maximum on the
    outer shell `d >= outer_fraction * max(d)` (up to `tol`), the grid surrogate
    of `sup (g + c d^2) < inf`. The largest accepted rate of `c_grid` is refined
    by `rounds` rounds of tenfold log-subdivision and finally polished with the
    slope of `g` against `d^2` on the outer shell when that slope passes too.

    Parameters
    ----------
    g : `np.ndarray`, required
        Profile `LW / W` on the sample.
    d2 : `np.ndarray`, required
        Squared distances to the base point.
    points : `np.ndarray`, required
        Sample points of shape `(m, n)`, used to report the worst point.
    """
    outer = d2 >= outer_fraction ** 2 * np.max(d2)
    inner = ~outer
    if not inner.any():
        inner = np.ones_like(outer)

    def bounded(c: float) -> bool:
        shifted = g + c * d2
        top = np.max(shifted[inner])
        return np.max(shifted[outer]) <= top + tol * max(1.0, abs(top))

    passing = [c for c in c_grid if bounded(c)]
    if not passing:
        worst = int(np.argmax(g + c_grid[0] * d2))
        raise LyapunovFitError(
            points[:, worst], "LW / W does not decay like -c d^2 for any c > 0 on the grid"
        )
    lo = max(passing)
    position = int(np.searchsorted(c_grid, lo))
    if position + 1 < len(c_grid):
        hi = c_grid[position + 1]
        for _ in range(rounds):
            candidates = np.geomspace(lo, hi, 11)
            accepted = [c for c in candidates if bounded(c)]
            lo = max(accepted)
            hi = candidates[min(int(np.searchsorted(candidates, lo)) + 1, 10)]
        slope = np.polyfit(d2[outer], g[outer], 1)[0] if outer.sum() > 1 else -lo
        if -slope > lo and bounded(-slope):
            lo = float(-slope)
    c = float(lo)
    b = max(0.0, float(np.max(g + c * d2)))
    logger.debug(f"Fitted Lyapunov constants c = {c!r}, b = {b!r}.")
    return LyapunovConstants(c=c, b=b)


def fit_constants(
    p: DiffusionProblem,
    W: Expression,
    grid: GridSpec,
    tol: float = 1e-9,
    rounds: int = 3,
) -> Tuple[LyapunovConstants, List[Violation]]:
    """Largest `c` and smallest `b` such that `LW <= (-c d^2 + b) W` on the grid."""
    points = grid.points(p.m)
    w = evaluate(W, points)
    low = np.flatnonzero(w < 1)
    if low.size:
        raise LyapunovPreconditionError(points[:, low[0]], float(w[low[0]]))
    g = evaluate(p.generator(W), points) / w
    if not np.all(np.isfinite(g)):
        worst = int(np.flatnonzero(~np.isfinite(g))[0])
        raise LyapunovFitError(points[:, worst], "LW / W is not finite on the grid")
    constants = fit_from_profile(g, p.distance_sq(points), points, tol=tol, rounds=rounds)
    return constants, scan_defect(p, W, constants, grid, tol=tol)


def derive_weak_constants(
    k: LyapunovConstants,
    p: DiffusionProblem,
    W: Expression,
    grid: GridSpec,
    c_prime: Optional[float] = None,
) -> WeakLyapunovConstants:
    """
    Constants of the weak form `LW <= -c' W + b' 1_{B(x0, R)}`.

    `c' = c` unless given, `R = sqrt((b + c') / c)` so that `-c d^2 + b <= -c'`
    outside the ball, and `b'` is the maximum of `LW + c' W` over grid points in the ball.
    """
    c_prime = k.c if c_prime is None else c_prime
    R = math.sqrt((k.b + c_prime) / k.c)
    points = grid.points(p.m)
    inside = p.distance_sq(points) <= R * R * (1 + 1e-12)
    b_prime = 0.0
    if inside.any():
        ball = points[:, inside]
        values = evaluate(p.generator(W), ball) + c_prime * evaluate(W, ball)
        b_prime = max(0.0, float(np.max(values)))
    return WeakLyapunovConstants(c_prime=c_prime, b_prime=b_prime, R=R)


def check_weak_form(
    p: DiffusionProblem,
    W: Expression,
    weak: WeakLyapunovConstants,
    grid: GridSpec,
    tol: float = 1e-9,
) -> List[Violation]:
    points = grid.points(p.m)
    w = evaluate(W, points)
    inside = p.distance_sq(points) <= weak.R * weak.R * (1 + 1e-12)
    defect = evaluate(p.generator(W), points) + weak.c_prime * w - weak.b_prime * inside
    bad = np.flatnonzero(defect > tol * np.maximum(1.0, w))
    return [Violation(tuple(points[:, i].tolist()), float(defect[i])) for i in bad]
