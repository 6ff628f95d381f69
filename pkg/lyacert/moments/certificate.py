from typing import Any, Dict, List, Optional, Sequence
import math
from dataclasses import dataclass, field
import pandas as pd
from fractions import Fraction
from lyacert.errors import DeltaRejectedError
from lyacert.moments.errors import MomentBoundError
from lyacert.moments.envelope import GrowthFactor, envelope_from_logs, log_exp_moment_bound
from lyacert.moments.recursions import (
    chain_sequence,
    gozlan_sequence,
    inv_sqrt_up,
    recursion_sequence,
    round_up,
    sqrt_up,
    to_floats,
    to_logs,
)


@dataclass(frozen=True)
class MomentCertificate:
    """
    Gaussian-integrability certificate `int exp(delta d^2) dmu <= exp_bound`.

    `beta_bounds[n]` bounds `int d^{2n} dmu`, `beta_n <= c_env gamma^n n!` for every `n`
    and `exp_bound = c_env / (1 - delta gamma)`. Logarithms are kept beside the values
    since Gozlan constants overflow doubles.
    """

    kind: str
    constants: Dict[str, float]
    delta: float
    gamma: float
    c_env: float
    log_c_env: float
    n_star: int
    beta_bounds: List[float]
    log_beta_bounds: List[float] = field(repr=False)
    exp_bound: float
    log_exp_bound: float

    @property
    def delta_gamma(self) -> float:
        return self.delta * self.gamma

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            **self.constants,
            "delta": self.delta,
            "gamma": self.gamma,
            "Cenv": self.c_env,
            "log_Cenv": self.log_c_env,
            "n_star": self.n_star,
            "betaBounds": list(self.beta_bounds),
            "expBound": self.exp_bound,
            "log_expBound": self.log_exp_bound,
        }


def _select_gamma(rate: float, delta: float, gamma: Optional[float]) -> float:
    if gamma is None:
        return (rate + 1 / delta) / 2 if delta > 0 else 2 * rate
    if not rate < gamma or delta * gamma >= 1:
        raise MomentBoundError(
            f"gamma = {gamma!r} must lie strictly between {rate!r} and 1 / delta."
        )
    return gamma


def _assemble(
    kind: str,
    constants: Dict[str, float],
    delta: float,
    gamma: float,
    sequence: List[Fraction],
    growth: GrowthFactor,
) -> MomentCertificate:
    envelope = envelope_from_logs(to_logs(sequence), gamma, growth, include_zero=True)
    log_bound = 0.0 if delta == 0 else log_exp_moment_bound(delta, gamma, envelope.log_c_env)
    return MomentCertificate(
        kind=kind,
        constants=constants,
        delta=delta,
        gamma=gamma,
        c_env=envelope.c_env,
        log_c_env=envelope.log_c_env,
        n_star=envelope.n_star,
        beta_bounds=to_floats(sequence).tolist(),
        log_beta_bounds=to_logs(sequence).tolist(),
        exp_bound=math.exp(log_bound) if log_bound < 709.0 else math.inf,
        log_exp_bound=log_bound,
    )


def certify(
    c: float, b: float, delta: float, n_max: int = 20, gamma: Optional[float] = None
) -> MomentCertificate:
    """
    Moment certificate for `LW <= (-c d^2 + b) W`.

    Parameters
    ----------
    c : `float`, required
        Lyapunov rate, `c > 0`.
    b : `float`, required
        Lyapunov offset, `b >= 0`.
    delta : `float`, required
        Exponent to certify; must be below `sqrt(c)`.
    n_max : `int`, optional (default = `20`)
        Number of moment bounds computed exactly.
    gamma : `float`, optional (default = `None`)
        Envelope rate in `(1 / sqrt(c), 1 / delta)`. The midpoint by default.
    """
    if not c > 0:
        raise MomentBoundError(f"Moment recursions need c > 0, got c = {c!r}.")
    if delta < 0:
        raise MomentBoundError(f"delta must be non-negative, got {delta!r}.")
    threshold = math.sqrt(c)
    if delta >= threshold:
        raise DeltaRejectedError(
            delta, threshold, f"the Lyapunov certificate needs delta < sqrt(c) = {threshold!r}"
        )
    recursion = recursion_sequence(c, b, n_max)
    chain = chain_sequence(c, b, n_max)
    sequence = [min(r, h) for r, h in zip(recursion, chain)]
    growth = GrowthFactor(
        offset=round_up(Fraction(b) / Fraction(c)), slope=round_up(inv_sqrt_up(Fraction(c)))
    )
    gamma = _select_gamma(growth.slope, delta, gamma)
    return _assemble("lyapunov", {"c": c, "b": b}, delta, gamma, sequence, growth)


def certify_gozlan(
    lambda1p: float,
    lambda2p: float,
    delta: float,
    n_max: int = 20,
    gamma: Optional[float] = None,
) -> MomentCertificate:
    """Moment certificate from the Gozlan recursion; admissible iff `delta < 1 / sqrt(lambda1')`."""
    if delta < 0:
        raise MomentBoundError(f"delta must be non-negative, got {delta!r}.")
    sequence = gozlan_sequence(lambda1p, lambda2p, n_max)
    threshold = 1 / math.sqrt(lambda1p)
    if delta >= threshold:
        raise DeltaRejectedError(
            delta,
            threshold,
            f"the Gozlan recursion needs delta < 1 / sqrt(lambda1') = {threshold!r}",
        )
    root = round_up(sqrt_up(Fraction(lambda1p)))
    growth = GrowthFactor(offset=round_up(Fraction(lambda2p) + Fraction(root)), slope=root)
    gamma = _select_gamma(root, delta, gamma)
    constants = {"lambda1p": lambda1p, "lambda2p": lambda2p}
    return _assemble("gozlan", constants, delta, gamma, sequence, growth)


def moment_table(
    certificate: MomentCertificate, oracle_moments: Optional[Sequence[float]] = None
) -> pd.DataFrame:
    table = pd.DataFrame(
        {"n": range(len(certificate.beta_bounds)), "beta_bound": certificate.beta_bounds}
    )
    if oracle_moments is not None:
        values = list(oracle_moments)[: len(table)]
        table["oracle_value"] = values + [math.nan] * (len(table) - len(values))
    return table
