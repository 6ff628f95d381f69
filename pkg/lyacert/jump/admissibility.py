from typing import NamedTuple
import math
import numpy as np
from lyacert.jump.errors import AdmissibilityError

ETA2_FACTOR = 18.0


class JumpAdmissibility(NamedTuple):
    c: float
    K: float
    delta_star: float
    n_star: float
    eta1: float
    eta2: float
    t: float

    @property
    def total(self) -> float:
        return self.eta1 + 2 * self.eta2

    def to_dict(self):
        return self._asdict()


def eta1(delta: float, c: float, K: float) -> float:
    return delta * delta * math.exp(delta * K) / (2 * c)


def eta2(delta: float, N: float, c: float, K: float) -> float:
    return ETA2_FACTOR * math.exp(delta * (2 * N + 3 * K)) / (N * N * c)


def best_cutoff(delta: float, c: float, K: float) -> float:
    """
    Minimizer over `N > 0` of `eta2(delta, N)`.

    `log eta2` is `2 delta N - 2 log N` plus terms free of `N`, so `N = 1 / delta`.
    """
    return 1 / delta


def admissibility_sum(delta: float, c: float, K: float) -> float:
    if delta == 0:
        return 0.0
    return eta1(delta, c, K) + 2 * eta2(delta, best_cutoff(delta, c, K), c, K)


def delta_search(c: float, K: float) -> JumpAdmissibility:
    """
    Largest `delta` with `eta1 + 2 eta2 < 1` for some cutoff `N`.

    The sum is increasing in `delta`, and with `K = 0` it equals
    `delta^2 (1/2 + 36 e^2) / c`, which bounds the search from above.
    Bisection runs to machine precision and keeps the admissible end.
    """
    if not c > 0:
        raise AdmissibilityError(f"Admissibility search needs c > 0, got c = {c!r}.")
    if not (K >= 0 and math.isfinite(K)):
        raise AdmissibilityError(f"Admissibility search needs a finite K >= 0, got K = {K!r}.")
    lo, hi = 0.0, math.sqrt(c / (0.5 + 2 * ETA2_FACTOR * math.e ** 2))
    if admissibility_sum(hi, c, K) < 1:
        lo = hi
    while hi - lo > np.finfo(float).eps * hi:
        mid = (lo + hi) / 2
        if admissibility_sum(mid, c, K) < 1:
            lo = mid
        else:
            hi = mid
    n_star = best_cutoff(lo, c, K) if lo > 0 else math.inf
    return JumpAdmissibility(
        c=c,
        K=K,
        delta_star=lo,
        n_star=n_star,
        eta1=eta1(lo, c, K),
        eta2=eta2(lo, n_star, c, K) if lo > 0 else 0.0,
        t=2 / lo if lo > 0 else math.inf,
    )
