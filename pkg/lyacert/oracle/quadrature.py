from typing import Callable, List, Optional, Sequence, Tuple, Union
import math
import numpy as np
from loguru import logger
from scipy.integrate import trapezoid
from lyacert.errors import OracleError
from lyacert.expr import Expression, evaluate
from lyacert.oracle.report import OracleReport, Verdict, divergent
from lyacert.oracle.metropolis import mc_expectation

Integrand = Union[Expression, Callable[[np.ndarray], np.ndarray]]
PointFunction = Callable[[np.ndarray], np.ndarray]


def as_function(f: Optional[Integrand]) -> Optional[PointFunction]:
    """Turn an expression into a function of a batch of points of shape `(m, n)`."""
    if f is None or not isinstance(f, Expression):
        return f
    return lambda points: evaluate(f, points)


def adaptive_simpson(
    func: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    tol: float,
    max_depth: int = 50,
    panels: int = 16,
    max_intervals: int = 2 ** 21,
) -> Tuple[float, float]:
    """
    Adaptive Simpson rule refining all unresolved intervals of a level at once.

    Parameters
    ----------
    func : `Callable[[np.ndarray], np.ndarray]`, required
        Vectorized integrand of one variable.
    lo : `float`, required
        Lower limit.
    hi : `float`, required
        Upper limit.
    tol : `float`, required
        Absolute tolerance, distributed over intervals proportionally to their width.
    max_depth : `int`, optional (default = `50`)
        Maximal number of bisections of an initial panel.
    panels : `int`, optional (default = `16`)
        Number of initial equal panels.
    max_intervals : `int`, optional (default = `2 ** 21`)
        Upper bound on simultaneously active intervals.

    Returns
    -------
    `Tuple[float, float]`
        Integral value and the accumulated error estimate.
    """

    def sample(points: np.ndarray) -> np.ndarray:
        values = np.asarray(func(points), dtype=float)
        if not np.all(np.isfinite(values)):
            raise OracleError("Integrand is not finite on the integration range.")
        return values

    if hi == lo:
        return 0.0, 0.0
    edges = np.linspace(lo, hi, panels + 1)
    a, b = edges[:-1], edges[1:]
    mid = (a + b) / 2
    fa, fm, fb = np.split(sample(np.concatenate([a, mid, b])), 3)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    tols = tol * (b - a) / (hi - lo)
    total: List[np.ndarray] = []
    error: List[np.ndarray] = []
    for _ in range(max_depth):
        left_mid, right_mid = (a + mid) / 2, (mid + b) / 2
        f_left, f_right = np.split(sample(np.concatenate([left_mid, right_mid])), 2)
        left = (mid - a) / 6 * (fa + 4 * f_left + fm)
        right = (b - mid) / 6 * (fm + 4 * f_right + fb)
        delta = left + right - whole
        done = np.abs(delta) <= 15 * tols
        total.append(left[done] + right[done] + delta[done] / 15)
        error.append(np.abs(delta[done]) / 15)
        keep = ~done
        if not keep.any():
            break
        if 2 * keep.sum() > max_intervals:
            raise OracleError(f"Adaptive Simpson exceeded {max_intervals} active intervals.")
        a, b, mid = (
            np.concatenate([a[keep], mid[keep]]),
            np.concatenate([mid[keep], b[keep]]),
            np.concatenate([left_mid[keep], right_mid[keep]]),
        )
        fa, fb, fm = (
            np.concatenate([fa[keep], fm[keep]]),
            np.concatenate([fm[keep], fb[keep]]),
            np.concatenate([f_left[keep], f_right[keep]]),
        )
        whole = np.concatenate([left[keep], right[keep]])
        tols = np.concatenate([tols[keep], tols[keep]]) / 2
    else:
        raise OracleError(f"Adaptive Simpson did not converge within depth {max_depth}.")
    return math.fsum(np.concatenate(total)), math.fsum(np.concatenate(error))


def integrate_1d(
    f: Integrand, lo: float, hi: float, tol: float = 1e-10, max_depth: int = 50
) -> OracleReport:
    """Adaptive Simpson integral of a one-dimensional integrand over `[lo, hi]`."""
    func = as_function(f)
    value, error = adaptive_simpson(
        lambda x: func(x.reshape(1, -1)), lo, hi, tol=tol, max_depth=max_depth
    )
    return OracleReport(
        value, error, Verdict.FINITE, {"route": "simpson", "lo": lo, "hi": hi, "tol": tol}
    )


def _scaled_integral_1d(
    log_density: PointFunction,
    func: Optional[PointFunction],
    lo: float,
    hi: float,
    rtol: float,
) -> Tuple[float, float, float]:
    """
    Integrate `func * exp(log_density)` over `[lo, hi]` after subtracting
    the maximum of `log_density` on a coarse grid.

    Returns the scaled integral, its error estimate and the shift.
    """
    grid = np.linspace(lo, hi, 4097).reshape(1, -1)
    coarse = log_density(grid)
    shift = float(np.max(coarse))
    if not np.isfinite(shift):
        raise OracleError("Log-density is not finite on the integration range.")

    def integrand(x: np.ndarray) -> np.ndarray:
        points = x.reshape(1, -1)
        values = np.exp(log_density(points) - shift)
        return values if func is None else values * func(points)

    magnitude = trapezoid(np.abs(integrand(grid[0])), grid[0])
    value, error = adaptive_simpson(integrand, lo, hi, tol=max(rtol * magnitude, 1e-300))
    return value, error, shift


def _polar_integral_2d(
    log_density: PointFunction,
    func: Optional[PointFunction],
    center: np.ndarray,
    radius: float,
    rtol: float,
    n_angle: int = 256,
) -> Tuple[float, float, float]:
    """
    Iterated rule over the disk of `radius` around `center`: adaptive Simpson
    in the radius over a periodic trapezoid in the angle. The angular error is
    the gap to the trapezoid with half the nodes, integrated on a coarse radial grid.
    """

    def ring(r: np.ndarray, n_a: int, shift: float) -> np.ndarray:
        theta = np.arange(n_a) * (2 * math.pi / n_a)
        rr, tt = np.meshgrid(r, theta, indexing="ij")
        points = np.stack([center[0] + rr * np.cos(tt), center[1] + rr * np.sin(tt)])
        points = points.reshape(2, -1)
        values = np.exp(log_density(points) - shift)
        if func is not None:
            values = values * func(points)
        return np.sum(values.reshape(r.size, n_a), axis=1) * (2 * math.pi / n_a) * r

    coarse_r = np.linspace(0.0, radius, 257)
    theta = np.arange(64) * (2 * math.pi / 64)
    rr, tt = np.meshgrid(coarse_r, theta, indexing="ij")
    coarse = log_density(
        np.stack([center[0] + rr * np.cos(tt), center[1] + rr * np.sin(tt)]).reshape(2, -1)
    )
    shift = float(np.max(coarse))
    if not np.isfinite(shift):
        raise OracleError("Log-density is not finite on the integration disk.")
    fine = ring(coarse_r, n_angle, shift)
    magnitude = trapezoid(np.abs(fine), coarse_r)
    angular = trapezoid(np.abs(fine - ring(coarse_r, n_angle // 2, shift)), coarse_r)
    value, error = adaptive_simpson(
        lambda r: ring(r, n_angle, shift), 0.0, radius, tol=max(rtol * magnitude, 1e-300)
    )
    return value, error + angular, shift


def _ball_integral(
    log_density: PointFunction,
    func: Optional[PointFunction],
    center: np.ndarray,
    radius: float,
    rtol: float,
) -> Tuple[float, float, float]:
    if center.size == 1:
        return _scaled_integral_1d(
            log_density, func, center[0] - radius, center[0] + radius, rtol=rtol
        )
    return _polar_integral_2d(log_density, func, center, radius, rtol=rtol)


def _prepare(m: Optional[int], x0: Optional[Sequence[float]]) -> np.ndarray:
    if x0 is None:
        return np.zeros(m or 1)
    center = np.asarray(x0, dtype=float).reshape(-1)
    if m is not None and center.size != m:
        raise OracleError(f"Base point has dimension {center.size}, expected {m}.")
    return center


def expectation(
    V: Expression,
    f: Optional[Integrand],
    m: int = 1,
    x0: Optional[Sequence[float]] = None,
    radius: float = 40.0,
    inner_radius: Optional[float] = None,
    rtol: float = 1e-12,
    seed: Optional[int] = None,
    steps: int = 20000,
) -> OracleReport:
    """
    Expectation of `f` under the probability measure proportional to `exp(-V)`.

    Both integrals are taken over the ball of `radius` around `x0`;
    with `inner_radius` the numerator is restricted to the smaller ball.
    Dimensions `m >= 3` are routed to the Metropolis oracle and need a `seed`.
    """
    center = _prepare(m, x0)
    func = as_function(f)
    if m >= 3:
        if seed is None:
            raise OracleError("Metropolis oracle for m >= 3 requires an explicit seed.")
        return mc_expectation(V, func, m=m, seed=seed, steps=steps, x0=center)

    def log_density(points: np.ndarray) -> np.ndarray:
        return -evaluate(V, points)

    z_value, z_error, z_shift = _ball_integral(log_density, None, center, radius, rtol)
    if z_value <= 0:
        raise OracleError("Normalization of exp(-V) vanished on the integration ball.")
    if inner_radius is None:
        value, error, shift = _ball_integral(log_density, func, center, radius, rtol)
    else:
        value, error, shift = _ball_integral(log_density, func, center, inner_radius, rtol)
    scale = math.exp(shift - z_shift) / z_value
    result = value * scale
    error = error * scale + abs(result) * z_error / z_value
    evidence = {
        "route": "simpson" if m == 1 else "polar",
        "radius": radius,
        "inner_radius": inner_radius,
        "log_normalization": z_shift + math.log(z_value),
    }
    return OracleReport(result, error, Verdict.FINITE, evidence)


def _sphere_directions(dim: int, count: int = 64) -> np.ndarray:
    if dim == 1:
        return np.array([[-1.0, 1.0]])
    theta = np.arange(count) * (2 * math.pi / count)
    return np.stack([np.cos(theta), np.sin(theta)])


def _boundary_exponent(log_integrand: PointFunction, center: np.ndarray, radius: float) -> float:
    """Largest value of the log-integrand on the sphere of `radius` around `center`."""
    points = center[:, None] + radius * _sphere_directions(center.size)
    with np.errstate(all="ignore"):
        values = np.asarray(log_integrand(points), dtype=float)
    values = np.where(np.isnan(values), -math.inf, values)
    return float(np.max(values))


def gaussian_tail_integral(
    V: Expression,
    delta: float,
    x0: Optional[Sequence[float]] = None,
    truncations: Sequence[float] = (5.0, 10.0, 20.0, 40.0),
    m: Optional[int] = None,
    weight: Optional[Integrand] = None,
    rtol: float = 1e-12,
    threshold: float = 1e9,
    growth: float = 10.0,
    cauchy_rtol: float = 1e-6,
    max_doublings: int = 6,
    seed: Optional[int] = None,
    steps: int = 20000,
) -> OracleReport:
    """
    Truncation oracle for `mu(exp(delta * |x - x0|^2) * weight)` with `mu ~ exp(-V)`.

    For every truncation radius `T` the integral over the ball `|x - x0| <= T`
    is normalized by the mass of `exp(-V)` over the same ball; all arithmetic
    is carried in log space.

    Beyond the last truncation the exponent `delta |x - x0|^2 - V` is evaluated
    on spheres of radius `2^k T` for `k <= max_doublings`. When it climbs above
    `log(threshold)` there, the ladder is extended by doubling up to that radius,
    so integrands that only start to grow far out are not mistaken for a plateau.

    The sequence is divergent when its last value exceeds `threshold`, its last
    step grew by at least `growth` and the exponent still increases at the
    boundary. It is finite when the last two values agree to `cauchy_rtol`, the
    exponent no longer increases at the boundary and no far sphere crosses the
    threshold. It is inconclusive otherwise.
    """
    center = _prepare(m, x0)
    dim = center.size
    func = as_function(weight)
    if dim >= 3:
        if seed is None:
            raise OracleError("Metropolis oracle for m >= 3 requires an explicit seed.")

        def integrand(points: np.ndarray) -> np.ndarray:
            values = np.exp(delta * np.sum((points - center[:, None]) ** 2, axis=0))
            return values if func is None else values * func(points)

        report = mc_expectation(V, integrand, m=dim, seed=seed, steps=steps, x0=center)
        verdict = Verdict.FINITE
        if report.verdict != Verdict.FINITE or report.error_estimate > 0.05 * abs(report.value):
            verdict = Verdict.INCONCLUSIVE
        return report._replace(verdict=verdict)

    def log_numerator(points: np.ndarray) -> np.ndarray:
        return delta * np.sum((points - center[:, None]) ** 2, axis=0) - evaluate(V, points)

    def log_normalizer(points: np.ndarray) -> np.ndarray:
        return -evaluate(V, points)

    log_values, log_normalization, errors = [], [], []

    def truncate(radius: float) -> None:
        value, error, shift = _ball_integral(log_numerator, func, center, radius, rtol)
        z_value, z_error, z_shift = _ball_integral(log_normalizer, None, center, radius, rtol)
        log_z = z_shift + math.log(z_value)
        log_values.append(shift + math.log(value) - log_z if value > 0 else -math.inf)
        log_normalization.append(log_z)
        errors.append(error / value + z_error / z_value if value > 0 else math.inf)

    radii = [float(radius) for radius in truncations]
    for radius in radii:
        truncate(radius)
    far = [radii[-1] * 2 ** k for k in range(1, max_doublings + 1)]
    crossing = next(
        (
            radius
            for radius in far
            if _boundary_exponent(log_numerator, center, radius) - log_normalization[-1]
            > math.log(threshold)
        ),
        None,
    )
    if crossing is not None:
        logger.debug(f"Exponent crosses the threshold at radius {crossing}; extending the ladder.")
        while radii[-1] < crossing:
            radii.append(radii[-1] * 2)
            truncate(radii[-1])
    rising = len(radii) > 1 and _boundary_exponent(
        log_numerator, center, radii[-1]
    ) > _boundary_exponent(log_numerator, center, radii[-2])
    evidence = {
        "route": "simpson" if dim == 1 else "polar",
        "truncations": radii,
        "log_values": log_values,
        "values": [math.exp(v) if v < 700 else None for v in log_values],
        "log_normalization": log_normalization,
        "boundary_rising": rising,
    }
    if len(radii) > 1 and abs(math.expm1(np.diff(log_normalization)[-1])) > 1e-3:
        raise OracleError(
            "Normalization of exp(-V) keeps growing with the truncation radius: "
            "not a probability measure."
        )
    logger.debug(f"Truncation log-values for delta = {delta}: {log_values}")
    if (
        len(log_values) > 1
        and rising
        and log_values[-1] > math.log(threshold)
        and log_values[-1] - log_values[-2] >= math.log(growth)
    ):
        return divergent(evidence)
    last = math.exp(log_values[-1]) if log_values[-1] < 700 else math.inf
    if len(log_values) > 1 and math.isfinite(last):
        gap = abs(math.expm1(log_values[-2] - log_values[-1])) * last
        error = gap + errors[-1] * last
        if gap <= cauchy_rtol * last and not rising and crossing is None:
            return OracleReport(last, error, Verdict.FINITE, evidence)
        return OracleReport(last, error, Verdict.INCONCLUSIVE, evidence)
    return OracleReport(last, math.inf, Verdict.INCONCLUSIVE, evidence)
