from typing import Callable, Dict, List, Tuple, Union
import math
import numpy as np
from tqdm import tqdm
from lyacert.errors import OracleError
from lyacert.expr import Expression, evaluate
from lyacert.oracle.report import OracleReport, Verdict, divergent

LogTerms = Union[Expression, Callable[[np.ndarray], np.ndarray], np.ndarray]


def _log_term_function(log_terms: LogTerms, i_min: int) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(log_terms, Expression):
        return lambda idx: evaluate(log_terms, idx.astype(float).reshape(1, -1))
    if isinstance(log_terms, np.ndarray):
        return lambda idx: log_terms[idx - i_min]
    return log_terms


def tail_slope(log_term: Callable[[np.ndarray], np.ndarray], i_max: int, i_min: int = 0) -> float:
    """Least-squares slope of `log t_i` against `log i` over the last decade of indices."""
    start = max(i_min, 1, i_max // 10)
    if i_max <= start:
        return -math.inf
    idx = np.unique(np.geomspace(start, i_max, 256).round().astype(np.int64))
    values = np.asarray(log_term(idx), dtype=float)
    finite = np.isfinite(values)
    if finite.sum() < 2:
        return -math.inf
    slope, _ = np.polyfit(np.log(idx[finite]), values[finite], 1)
    return float(slope)


def _log_tail_estimate(log_term_value: float, n: int, slope: float) -> float:
    """Logarithm of the power-law tail `sum_{i > n} t_i ~ t_n * n / (-s - 1)`."""
    if not math.isfinite(log_term_value):
        return -math.inf
    if slope >= -1:
        return math.inf
    if n <= 0:
        return -math.inf
    return log_term_value + math.log(n) - math.log(-slope - 1)


def _exp(log_value: float) -> float:
    return math.exp(log_value) if log_value < 709 else math.inf


def series_sum(
    log_terms: LogTerms,
    i_max: int,
    i_min: int = 0,
    margin: float = 0.05,
    cauchy_rtol: float = 0.05,
    chunk: int = 2 ** 20,
    progress: bool = False,
) -> OracleReport:
    """
    Sum `t_i` for `i` in `[i_min, i_max]` from their logarithms.

    Partial sums are accumulated in log-sum-exp form, so terms far beyond
    the double range are handled. The verdict uses the tail slope of
    `log t_i` against `log i` over the last decade: a slope at or above
    `-1 - margin` is divergent. Otherwise the sums up to `i_max / 2` and
    `i_max`, each completed with the power-law tail estimate, must agree
    within `cauchy_rtol` for a finite verdict.

    Parameters
    ----------
    log_terms : `LogTerms`, required
        Either a function of an integer index array, an expression in `x1`
        (the index), or a precomputed array of `log t_i` for `i_min..i_max`.
    """
    if i_max < i_min:
        raise OracleError(f"Empty summation range [{i_min}, {i_max}].")
    log_term = _log_term_function(log_terms, i_min)
    half = max(i_min, i_max // 2)
    running = -math.inf
    log_half = -math.inf
    checkpoints: List[Tuple[int, float]] = []
    decade = 10 ** max(0, int(math.log10(max(i_min, 1))) + 1)
    starts = range(i_min, i_max + 1, chunk)
    for start in tqdm(starts, disable=not progress, desc="series"):
        idx = np.arange(start, min(start + chunk, i_max + 1), dtype=np.int64)
        values = np.asarray(log_term(idx), dtype=float)
        if np.any(np.isnan(values)) or np.any(values == math.inf):
            raise OracleError(f"Non-finite log-term in [{idx[0]}, {idx[-1]}].")
        with np.errstate(invalid="ignore"):
            partial = np.logaddexp(running, np.logaddexp.accumulate(values))
        if idx[0] <= half <= idx[-1]:
            log_half = float(partial[half - start])
        while decade <= idx[-1]:
            if decade >= idx[0]:
                checkpoints.append((decade, float(partial[decade - start])))
            decade *= 10
        running = float(_log_fsum(values, running))
    slope = tail_slope(log_term, i_max, i_min=i_min)
    last_terms = np.asarray(log_term(np.array([half, i_max], dtype=np.int64)), dtype=float)
    evidence: Dict = {
        "i_min": i_min,
        "i_max": i_max,
        "tail_slope": slope,
        "log_partial_sum": running,
        "checkpoints": checkpoints + [(i_max, running)],
    }
    if slope >= -1 - margin:
        return divergent(evidence)
    log_tail = _log_tail_estimate(last_terms[1], i_max, slope)
    log_total = float(np.logaddexp(running, log_tail))
    log_at_half = float(np.logaddexp(log_half, _log_tail_estimate(last_terms[0], half, slope)))
    relative_gap = abs(math.expm1(log_at_half - log_total)) if log_total > -math.inf else 0.0
    evidence.update({"log_value": log_total, "extrapolated_half": _exp(log_at_half)})
    verdict = Verdict.FINITE if relative_gap <= cauchy_rtol else Verdict.INCONCLUSIVE
    total = _exp(log_total)
    error = total * relative_gap + _exp(log_tail) if math.isfinite(total) else math.inf
    evidence["extrapolated"] = total
    return OracleReport(total, error, verdict, evidence)


def _log_fsum(values: np.ndarray, running: float) -> float:
    shift = float(np.max(values))
    if not math.isfinite(shift):
        return running
    chunk_sum = math.log(math.fsum(np.exp(values - shift))) + shift
    return float(np.logaddexp(running, chunk_sum))
