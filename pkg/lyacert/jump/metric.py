from typing import NamedTuple, Tuple
import numpy as np
from enum import Enum
from loguru import logger
from lyacert.jump.chain import BirthDeathChain


class Boundedness(str, Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INCONCLUSIVE = "inconclusive"


class JumpMetric(NamedTuple):
    K: float
    verdict: Boundedness
    argmax: int
    horizon: int
    tail_slope: float

    def to_dict(self):
        return {**self._asdict(), "verdict": self.verdict.value}


def intrinsic_rho(ch: BirthDeathChain, i: int, j: int = 0) -> float:
    """Path metric `rho(i, j) = |sum_{j <= k < i} b_k^{-1/2}|`."""
    rho = ch.rho(max(i, j))
    return float(abs(rho[i] - rho[j]))


def squared_increments(ch: BirthDeathChain, i_max: int) -> np.ndarray:
    """`rho(i + 1, 0)^2 - rho(i, 0)^2` for `i = 0..i_max - 1`."""
    return np.diff(ch.rho(i_max) ** 2)


def jump_metric_K(
    ch: BirthDeathChain, i_max: int = 10 ** 4, margin: float = 0.05
) -> JumpMetric:
    """
    `K = sup_i sup_{y = +-1} |rho^2(i + y, 0) - rho^2(i, 0)|` scanned up to `i_max`.

    The jump at `i` down to `i - 1` is the jump at `i - 1` up to `i`, so `K` is the
    largest squared increment. Over the last decade of indices the increments must
    be non-increasing for a bounded verdict; non-decreasing with a log-log slope
    above `margin` is unbounded; anything else is inconclusive.
    """
    increments = squared_increments(ch, i_max)
    argmax = int(np.argmax(increments))
    start = max(1, i_max // 10)
    tail = increments[start:]
    idx = np.arange(start, i_max)
    slope = float(np.polyfit(np.log(idx), np.log(tail), 1)[0]) if tail.size > 1 else 0.0
    steps = np.diff(tail)
    noise = 1e-12 * np.abs(tail[1:])
    if np.all(steps <= noise):
        verdict = Boundedness.BOUNDED
    elif np.all(steps >= -noise) and slope > margin:
        verdict = Boundedness.UNBOUNDED
    else:
        verdict = Boundedness.INCONCLUSIVE
    logger.debug(f"Jump metric scan to {i_max}: K = {increments[argmax]!r}, {verdict.value}.")
    return JumpMetric(float(increments[argmax]), verdict, argmax, i_max, slope)


def carre_du_champ_rho(ch: BirthDeathChain, i_max: int) -> Tuple[np.ndarray, float]:
    """
    `Gamma_nu(rho, rho)(i) = (b_i (rho(i+1) - rho(i))^2 + d_i (rho(i-1) - rho(i))^2) / 2`
    for `i = 0..i_max - 1` and its supremum. A supremum above `1` is logged as a discrepancy.
    """
    rho = ch.rho(i_max)
    idx = np.arange(i_max)
    up = ch.birth_rates(idx) * np.diff(rho) ** 2
    down = np.zeros(i_max)
    down[1:] = ch.death_rates(idx[1:]) * np.diff(rho)[:-1] ** 2
    profile = (up + down) / 2
    sup = float(np.max(profile))
    if sup > 1 + 1e-9:
        at = int(np.argmax(profile))
        logger.bind(discrepancy="carre_du_champ").warning(
            f"Gamma_nu(rho, rho) reaches {sup:.5g} at i = {at}: "
            "rho is not 1-Lipschitz for the jump kernel."
        )
    return profile, sup
