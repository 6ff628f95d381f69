from typing import Any, Dict, NamedTuple, Optional, Sequence
import math
import numpy as np
from loguru import logger
from lyacert.oracle import OracleReport, Verdict, gaussian_tail_integral
from lyacert.moments import MomentCertificate, certify
from lyacert.diffusion import LyapunovConstants
from lyacert.unbounded.errors import DivergentWeightError
from lyacert.unbounded.operator import lambda_max_values
from lyacert.unbounded.problem import UnboundedProblem


class WeightedCertificate(NamedTuple):
    """
    Certificate for `mu(exp(delta d^2) lambda_max) <= mass * certificate.exp_bound`.

    The moment certificate is normalized per unit `mass = mu(lambda_max)`.
    """

    certificate: MomentCertificate
    mass: OracleReport
    tail: Optional[OracleReport]

    @property
    def bound(self) -> float:
        return self.mass.value * self.certificate.exp_bound

    def weighted_moment_bounds(self) -> np.ndarray:
        return self.mass.value * np.asarray(self.certificate.beta_bounds)

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.certificate.to_dict(),
            "mu_lambda_max": self.mass.to_dict(),
            "weighted_bound": self.bound,
        }


def weighted_certificate(
    p: UnboundedProblem,
    k: LyapunovConstants,
    delta: float,
    n_max: int = 20,
    truncations: Sequence[float] = (5.0, 10.0, 20.0, 40.0),
    seed: Optional[int] = None,
) -> WeightedCertificate:
    """
    Weighted Gaussian-integrability certificate for `L_a W <= (-c d^2 + b) lambda_max W`.

    The weighted moments `int d^{2n} lambda_max dmu / mu(lambda_max)` satisfy the
    classical recursions with the same `(c, b)`, so `certify` is reused. The oracle
    first confirms `mu(lambda_max) < inf` and then, when the dimension allows it
    (or a seed is given), evaluates `mu(exp(delta d^2) lambda_max)` for comparison.
    """
    certificate = certify(k.c, k.b, delta, n_max=n_max)

    def weight(points: np.ndarray) -> np.ndarray:
        return lambda_max_values(p, points)

    kwargs = {"x0": p.x0, "truncations": truncations, "weight": weight, "seed": seed}
    mass = gaussian_tail_integral(p.V, 0.0, **kwargs)
    if mass.verdict == Verdict.DIVERGENT or not math.isfinite(mass.value):
        raise DivergentWeightError(
            f"mu(lambda_max) is not finite (oracle verdict {mass.verdict.value})."
        )
    tail = None
    if p.m <= 2 or seed is not None:
        tail = gaussian_tail_integral(p.V, delta, **kwargs)
        bound = mass.value * certificate.exp_bound
        if tail.is_finite and tail.value > bound * (1 + 1e-9):
            logger.bind(discrepancy="weighted_bound").warning(
                f"Oracle value {tail.value!r} exceeds the weighted bound {bound!r}."
            )
    return WeightedCertificate(certificate, mass, tail)
