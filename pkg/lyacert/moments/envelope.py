from typing import NamedTuple, Optional, Sequence
import math
import numpy as np
from scipy.special import gammaln
from lyacert.moments.errors import MomentBoundError


class GrowthFactor(NamedTuple):
    """Chain growth factor `offset + slope * n` bounding `beta_n / beta_{n-1}`."""

    offset: float
    slope: float

    def __call__(self, n):
        return self.offset + self.slope * n

    def crossover(self, gamma: float) -> int:
        """Smallest `n >= 1` with `offset + slope * k <= gamma * k` for every `k >= n`."""
        if not gamma > self.slope:
            raise MomentBoundError(
                f"gamma = {gamma!r} does not exceed the growth rate {self.slope!r}: "
                "the factorial envelope needs gamma strictly above it."
            )
        return max(1, math.ceil(self.offset / (gamma - self.slope)))


class Envelope(NamedTuple):
    c_env: float
    log_c_env: float
    n_star: int
    gamma: float
    argmax: int


def envelope_from_logs(
    log_bounds: Sequence[float],
    gamma: float,
    growth: GrowthFactor,
    include_zero: bool = False,
) -> Envelope:
    """
    Smallest `C` with `beta_n <= C gamma^n n!` for every `n`, from `log(beta_n)`.

    Past the computed range the bounds are continued with the chain growth
    factor up to the crossover `n*`; from there on `beta_n / (gamma^n n!)`
    cannot increase, so the maximum over the extended range is the envelope.

    Parameters
    ----------
    log_bounds : `Sequence[float]`, required
        `log(beta_0) .. log(beta_N)`.
    gamma : `float`, required
        Envelope rate.
    growth : `GrowthFactor`, required
        Growth factor of the chain step that produced (or dominates) the bounds.
    include_zero : `bool`, optional (default = `False`)
        Whether `n = 0` (where `beta_0 = 1`) takes part in the maximum.
    """
    n_star = growth.crossover(gamma)
    log_b = np.asarray(log_bounds, dtype=float)
    if np.isnan(log_b).any() or (log_b == math.inf).any():
        raise MomentBoundError("Bounds must be finite to build a factorial envelope.")
    computed = log_b.size - 1
    if n_star - 1 > computed:
        n = np.arange(computed + 1, n_star, dtype=float)
        log_b = np.concatenate([log_b, log_b[-1] + np.cumsum(np.log(growth(n)))])
    n = np.arange(log_b.size, dtype=float)
    terms = log_b - n * math.log(gamma) - gammaln(n + 1)
    start = 0 if include_zero else 1
    argmax = start + int(np.argmax(terms[start:]))
    log_c = float(terms[argmax])
    c_env = math.exp(log_c) if log_c < 709.0 else math.inf
    return Envelope(c_env=c_env, log_c_env=log_c, n_star=n_star, gamma=gamma, argmax=argmax)


def growth_from_logs(log_bounds: Sequence[float]) -> GrowthFactor:
    """
    Line through the last two ratios `beta_n / beta_{n-1}`, raised until it
    dominates every computed ratio. An extrapolation for bounds of unknown origin;
    certificates pass the growth factor of their recursion instead.
    """
    log_b = np.asarray(log_bounds, dtype=float)
    if log_b.size < 3 or not np.all(np.isfinite(log_b)):
        raise MomentBoundError("At least three finite bounds are needed to derive a growth factor.")
    ratios = np.exp(np.diff(log_b))
    n = np.arange(1, log_b.size, dtype=float)
    slope = max(0.0, float(ratios[-1] - ratios[-2]))
    return GrowthFactor(offset=max(0.0, float(np.max(ratios - slope * n))), slope=slope)


def factorial_envelope(
    bounds: Sequence[float],
    gamma: float,
    growth: Optional[GrowthFactor] = None,
    include_zero: bool = False,
    log_bounds: Optional[Sequence[float]] = None,
) -> Envelope:
    """
    `envelope_from_logs` on plain bounds (or on `log_bounds` when they are given).
    Without `growth` it is derived from the bounds by `growth_from_logs`.
    """
    if log_bounds is None:
        values = np.asarray(bounds, dtype=float)
        if not np.all(np.isfinite(values)):
            raise MomentBoundError("Bounds must be finite to build a factorial envelope.")
        with np.errstate(divide="ignore"):
            log_bounds = np.log(values)
    if growth is None:
        growth = growth_from_logs(log_bounds)
    return envelope_from_logs(log_bounds, gamma, growth, include_zero=include_zero)


def exp_moment_bound(delta: float, gamma: float, c_env: float) -> float:
    """`C / (1 - delta gamma)`, the Fatou bound on `int exp(delta d^2) dmu`."""
    if delta < 0:
        raise MomentBoundError(f"delta must be non-negative, got {delta!r}.")
    if delta * gamma >= 1:
        raise MomentBoundError(
            f"delta * gamma = {delta * gamma!r} >= 1: the exponential series diverges."
        )
    return c_env / (1 - delta * gamma)


def log_exp_moment_bound(delta: float, gamma: float, log_c_env: float) -> float:
    if delta * gamma >= 1:
        raise MomentBoundError(
            f"delta * gamma = {delta * gamma!r} >= 1: the exponential series diverges."
        )
    return log_c_env - math.log1p(-delta * gamma)
