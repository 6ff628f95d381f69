from typing import Callable, Optional, Sequence
import math
import numpy as np
from tqdm import tqdm
from loguru import logger
from lyacert.expr import Expression, evaluate
from lyacert.oracle.report import OracleReport, Verdict

ACCEPTANCE_RANGE = (0.1, 0.7)


def mc_expectation(
    V: Expression,
    f: Optional[Callable[[np.ndarray], np.ndarray]],
    m: int,
    seed: int,
    steps: int = 20000,
    warmup: int = 2000,
    chains: int = 32,
    batches: int = 20,
    x0: Optional[Sequence[float]] = None,
    step_size: float = 1.0,
    target_acceptance: float = 0.35,
    tune_every: int = 100,
    progress: bool = False,
) -> OracleReport:
    """
    Random-walk Metropolis estimate of `E[f]` under the density proportional to `exp(-V)`.

    Parameters
    ----------
    V : `Expression`, required
        Potential of the target measure.
    f : `Callable[[np.ndarray], np.ndarray]`, optional
        Function of a batch of points of shape `(m, n)`. `None` means `f = 1`.
    m : `int`, required
        Dimension.
    seed : `int`, required
        Seed of `np.random.default_rng`; the report is fully determined by it.
    steps : `int`, optional (default = `20000`)
        Sampling steps per chain after warm-up.
    warmup : `int`, optional (default = `2000`)
        Warm-up steps. The proposal scale is tuned towards `target_acceptance`
        every `tune_every` steps of warm-up and then frozen.
    chains : `int`, optional (default = `32`)
        Independent chains advanced in lockstep.
    batches : `int`, optional (default = `20`)
        Batches per chain for the batch-means standard error.
    """
    rng = np.random.default_rng(seed)
    center = np.zeros(m) if x0 is None else np.asarray(x0, dtype=float).reshape(-1)
    x = center[:, None] + rng.standard_normal((m, chains))
    log_p = -evaluate(V, x)
    scale = step_size
    window_accepted = 0
    for step in range(warmup):
        x, log_p, accepted = _metropolis_step(V, x, log_p, scale, rng)
        window_accepted += accepted
        if (step + 1) % tune_every == 0:
            rate = window_accepted / (tune_every * chains)
            scale *= math.exp(rate - target_acceptance)
            window_accepted = 0
    samples = np.empty((steps, chains))
    total_accepted = 0
    for step in tqdm(range(steps), disable=not progress, desc="metropolis"):
        x, log_p, accepted = _metropolis_step(V, x, log_p, scale, rng)
        total_accepted += accepted
        samples[step] = 1.0 if f is None else f(x)
    acceptance = total_accepted / (steps * chains)
    batch_size = steps // batches
    batch_means = samples[: batch_size * batches].reshape(batches, batch_size, chains).mean(axis=1)
    value = float(samples.mean())
    standard_error = float(batch_means.std(ddof=1) / math.sqrt(batch_means.size))
    flagged = not ACCEPTANCE_RANGE[0] <= acceptance <= ACCEPTANCE_RANGE[1]
    if flagged:
        logger.warning(
            f"Metropolis acceptance rate {acceptance:.3f} is outside {ACCEPTANCE_RANGE}."
        )
    evidence = {
        "route": "metropolis",
        "seed": seed,
        "steps": steps,
        "warmup": warmup,
        "chains": chains,
        "batches": batches,
        "step_size": scale,
        "acceptance_rate": acceptance,
        "acceptance_flagged": flagged,
    }
    verdict = Verdict.INCONCLUSIVE if flagged else Verdict.FINITE
    return OracleReport(value, standard_error, verdict, evidence)


def _metropolis_step(V, x, log_p, scale, rng):
    proposal = x + scale * rng.standard_normal(x.shape)
    log_q = -evaluate(V, proposal)
    accept = np.log(rng.random(x.shape[1])) < log_q - log_p
    return np.where(accept, proposal, x), np.where(accept, log_q, log_p), int(accept.sum())
