from typing import NamedTuple, Tuple
import math
import numpy as np
import pandas as pd
from loguru import logger
from lyacert.diffusion import LyapunovPreconditionError
from lyacert.jump.chain import BirthDeathChain, Rule, rule_values


def generator_nu_values(ch: BirthDeathChain, W: Rule, idx: np.ndarray) -> np.ndarray:
    """`L_nu W(i) = b_i (W(i+1) - W(i)) + d_i (W(i-1) - W(i))`; the death term vanishes at `0`."""
    idx = np.asarray(idx, dtype=np.int64)
    here = rule_values(W, idx, "W")
    up = rule_values(W, idx + 1, "W")
    down = rule_values(W, np.maximum(idx - 1, 0), "W")
    return ch.birth_rates(idx) * (up - here) + ch.death_rates(idx) * (down - here)


def generator_nu_apply(ch: BirthDeathChain, W: Rule, i: int) -> float:
    return float(generator_nu_values(ch, W, np.array([i]))[0])


def generator_ratio(
    ch: BirthDeathChain, W: Rule, idx: np.ndarray, log_weight: bool = False
) -> np.ndarray:
    """
    `L_nu W / W` on an index array.

    With `log_weight` the rule gives `log W` and the ratio is formed from
    differences of logarithms, so weights like `2^i` never overflow.
    """
    idx = np.asarray(idx, dtype=np.int64)
    if not log_weight:
        return generator_nu_values(ch, W, idx) / rule_values(W, idx, "W")
    here = rule_values(W, idx, "W")
    up = rule_values(W, idx + 1, "W") - here
    down = rule_values(W, np.maximum(idx - 1, 0), "W") - here
    return ch.birth_rates(idx) * np.expm1(up) + ch.death_rates(idx) * np.expm1(down)


class JumpLyapunovFit(NamedTuple):
    c: float
    b: float
    passed: bool
    tail_min: float
    intercept: float
    profile: pd.DataFrame


def fit_jump_lyapunov(
    ch: BirthDeathChain,
    W: Rule,
    i_range: Tuple[int, int] = (10, 10 ** 6),
    log_weight: bool = False,
    tail_fraction: float = 0.1,
    decay_ratio: float = 0.5,
    profile_points: int = 2000,
) -> JumpLyapunovFit:
    """
    Fit `L_nu W <= (-c rho^2 + b) W` on a range of indices.

    `c` is the infimum of `q_i = (-L_nu W / W) / rho(i, 0)^2` over the last
    `tail_fraction` of the range. The tail of `q` is regressed on `1 / log i`;
    an extrapolated limit below `decay_ratio` times that infimum means `q`
    decays to zero and no `c > 0` exists. `b` is the maximum of `L_nu W / W + c rho^2`
    over `[0, i_hi]`.

    Parameters
    ----------
    ch : `BirthDeathChain`, required
        The chain.
    W : `Rule`, required
        Lyapunov weight (or its logarithm with `log_weight`).
    i_range : `Tuple[int, int]`, optional (default = `(10, 10 ** 6)`)
        Indices scanned for `c`.
    """
    i_lo, i_hi = i_range
    idx = np.arange(i_hi + 1)
    values = rule_values(W, idx, "W")
    low = np.flatnonzero(values < (0.0 if log_weight else 1.0))
    if low.size:
        w = math.exp(values[low[0]]) if log_weight else values[low[0]]
        raise LyapunovPreconditionError((int(idx[low[0]]),), float(w))
    ratio = generator_ratio(ch, W, idx, log_weight=log_weight)
    rho_sq = ch.rho(i_hi) ** 2
    scan = idx[max(i_lo, 1):]
    q = -ratio[scan] / rho_sq[scan]
    tail = scan >= max(i_lo, int(i_hi * tail_fraction))
    tail_min = float(np.min(q[tail]))
    slope, intercept = np.polyfit(1 / np.log(scan[tail]), q[tail], 1)
    decaying = intercept < decay_ratio * tail_min
    passed = tail_min > 0 and not decaying
    c = max(0.0, tail_min) if passed else 0.0
    if not passed:
        logger.warning(
            f"No c > 0 on [{i_lo}, {i_hi}]: tail infimum of -LW / (W rho^2) is {tail_min:.4g}, "
            f"extrapolated limit {intercept:.4g} (slope {slope:.4g} in 1 / log i)."
        )
    b = max(0.0, float(np.max(ratio + c * rho_sq)))
    sampled = np.unique(np.geomspace(max(i_lo, 1), i_hi, profile_points).round().astype(np.int64))
    profile = pd.DataFrame(
        {
            "i": sampled,
            "rho": np.sqrt(rho_sq[sampled]),
            "ratio": ratio[sampled],
            "q": -ratio[sampled] / rho_sq[sampled],
        }
    )
    return JumpLyapunovFit(c, b, passed, tail_min, float(intercept), profile)
