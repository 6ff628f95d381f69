from typing import NamedTuple, Optional, Sequence
import math
import numpy as np
import pandas as pd
from loguru import logger
from scipy.special import logsumexp
from lyacert.oracle import OracleReport, Verdict, series_sum
from lyacert.jump.chain import BirthDeathChain, Rule, rule_values
from lyacert.jump.errors import DivergentMeasureError
from lyacert.jump.lyapunov import generator_nu_values


class StationaryMeasure(NamedTuple):
    log_mu: np.ndarray
    log_normalizer: float
    tail: OracleReport

    @property
    def mu(self) -> np.ndarray:
        return np.exp(self.log_mu)


def stationary_measure(
    ch: BirthDeathChain,
    i_max: int,
    margin: float = 0.05,
    cauchy_rtol: float = 0.05,
    progress: bool = False,
) -> StationaryMeasure:
    """
    Stationary weights `mu(i) = r_i / sum r`, normalized over `[0, i_max]`.

    The tail of `sum r_i` is judged by the series oracle; a divergent verdict
    means there is no stationary probability measure.
    """
    if i_max < 1:
        raise DivergentMeasureError(f"iMax must be at least 1, got {i_max}.")
    log_r = ch.log_r(i_max)
    tail = series_sum(log_r, i_max, margin=margin, cauchy_rtol=cauchy_rtol, progress=progress)
    if tail.is_divergent:
        raise DivergentMeasureError(
            f"sum r_i diverges (tail slope {tail.evidence['tail_slope']!r}): "
            "the chain has no stationary probability measure."
        )
    log_normalizer = float(logsumexp(log_r))
    return StationaryMeasure(log_r - log_normalizer, log_normalizer, tail)


def gaussian_series(
    ch: BirthDeathChain,
    delta: float,
    i_max: int = 10 ** 6,
    margin: float = 0.05,
    cauchy_rtol: float = 0.05,
    progress: bool = False,
) -> OracleReport:
    """Series oracle for `sum_i mu(i) exp(delta rho(i, 0)^2)`."""
    measure = stationary_measure(ch, i_max, progress=progress)
    log_terms = measure.log_mu + delta * ch.rho(i_max) ** 2
    report = series_sum(
        log_terms, i_max, margin=margin, cauchy_rtol=cauchy_rtol, progress=progress
    )
    report.evidence["delta"] = delta
    return report


def series_table(
    ch: BirthDeathChain,
    delta: float,
    i_max: int,
    indices: Optional[Sequence[int]] = None,
    points: int = 1000,
) -> pd.DataFrame:
    """
    Rows `(i, mu, rho, term, partial_sum)` of `sum mu(i) exp(delta rho^2)`.

    Without `indices` the first 100 indices and `points` log-spaced ones are listed.
    """
    measure = stationary_measure(ch, i_max)
    rho = ch.rho(i_max)
    log_terms = measure.log_mu + delta * rho ** 2
    log_partial = np.logaddexp.accumulate(log_terms)
    if indices is None:
        log_spaced = np.geomspace(1, i_max, points).round().astype(np.int64)
        indices = np.unique(np.concatenate([np.arange(min(100, i_max + 1)), log_spaced]))
    idx = np.asarray(indices, dtype=np.int64)
    with np.errstate(over="ignore"):
        return pd.DataFrame(
            {
                "i": idx,
                "mu": measure.mu[idx],
                "rho": rho[idx],
                "term": np.exp(log_terms[idx]),
                "partial_sum": np.exp(log_partial[idx]),
            }
        )


def convergence_threshold(
    ch: BirthDeathChain,
    deltas: Sequence[float] = tuple(0.05 * k for k in range(1, 11)),
    i_max: int = 10 ** 6,
    claimed: Optional[float] = None,
) -> pd.DataFrame:
    """
    Series verdicts over a range of exponents.

    With `claimed`, a first divergent exponent below it is logged as a discrepancy.
    """
    rows = []
    for delta in deltas:
        report = gaussian_series(ch, delta, i_max=i_max)
        rows.append(
            {
                "delta": delta,
                "verdict": report.verdict.value,
                "tail_slope": report.evidence["tail_slope"],
                "value": report.value,
            }
        )
    table = pd.DataFrame(rows)
    divergent = table.loc[table["verdict"] == Verdict.DIVERGENT.value, "delta"]
    first = float(divergent.min()) if len(divergent) else math.inf
    table.attrs["threshold"] = first
    if claimed is not None and first < claimed:
        logger.bind(discrepancy="rho_threshold").warning(
            f"With the exact intrinsic metric the Gaussian series already diverges at "
            f"delta = {first}, below the stated range delta < {claimed}."
        )
    return table


def _weights(ch: BirthDeathChain, i_max: int) -> np.ndarray:
    log_r = ch.log_r(i_max)
    return np.exp(log_r - logsumexp(log_r))


def dirichlet_form(ch: BirthDeathChain, f: Rule, g: Rule, i_max: int) -> float:
    """`sum_i (f(i+1) - f(i)) (g(i+1) - g(i)) b_i mu(i)` over `[0, i_max)`."""
    idx = np.arange(i_max + 1)
    df = np.diff(rule_values(f, idx, "f"))
    dg = np.diff(rule_values(g, idx, "g"))
    weights = _weights(ch, i_max)[:-1] * ch.birth_rates(idx[:-1])
    return math.fsum(df * dg * weights)


def generator_pairing(ch: BirthDeathChain, f: Rule, g: Rule, i_max: int) -> float:
    """`sum_i -f(i) L_nu g(i) mu(i)` over `[0, i_max)`."""
    idx = np.arange(i_max)
    f_values = rule_values(f, idx, "f")
    lg = generator_nu_values(ch, g, idx)
    return math.fsum(-f_values * lg * _weights(ch, i_max)[:-1])
