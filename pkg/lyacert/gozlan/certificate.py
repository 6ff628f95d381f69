from typing import Any, Dict, NamedTuple, Optional, Sequence
from lyacert.errors import DeltaRejectedError
from lyacert.expr import Expression, evaluate
from lyacert.oracle import expectation
from lyacert.moments import MomentCertificate, certify_gozlan
from lyacert.gozlan.errors import GozlanConditionError
from lyacert.gozlan.condition import A_GOZLAN, DEFAULT_SHELLS, ConditionCheck, check_condition
from lyacert.gozlan.constants import GozlanConstants, GozlanParameters, lambda_constants
from lyacert.gozlan.optimizer import default_parameters


class GozlanCertificate(NamedTuple):
    condition: ConditionCheck
    params: GozlanParameters
    constants: GozlanConstants
    certificate: MomentCertificate

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.certificate.to_dict(),
            "condition": self.condition.to_dict(),
            "params": self.params.to_dict(),
            "gozlan_constants": self.constants.to_dict(),
        }


def gozlan_certificate(
    V: Expression,
    m: int,
    delta: float,
    params: Optional[GozlanParameters] = None,
    shells: Sequence[float] = DEFAULT_SHELLS,
    n_max: int = 20,
    a: float = A_GOZLAN,
    condition: Optional[ConditionCheck] = None,
) -> GozlanCertificate:
    """
    Certificate for `mu(exp(delta |x|^2)) < inf` under the Gozlan-type condition.

    The condition is checked first; its smallest passing shell radius is the `R`
    of the default parameters. With explicit `params` their own `R` is used.
    A precomputed `condition` check is reused as is.
    """
    if condition is None:
        condition = check_condition(V, m, shells=shells, a=a)
    if not condition.passed:
        raise GozlanConditionError(
            f"Gozlan-type condition {condition.verdict.value}: "
            f"liminf estimate {condition.liminf!r} against m = {m}."
        )
    if params is None:
        params = default_parameters(m, condition.R, a=a)
    constants = lambda_constants(params)
    if delta >= constants.delta_bound:
        raise DeltaRejectedError(
            delta,
            constants.delta_bound,
            f"the Gozlan constants need delta < (lambda1 m)^(-1/2) = {constants.delta_bound!r}",
        )
    certificate = certify_gozlan(constants.lambda1p, constants.lambda2p, delta, n_max=n_max)
    return GozlanCertificate(condition, params, constants, certificate)


class LemmaResidual(NamedTuple):
    lhs: float
    rhs: float

    def holds(self, tol: float = 1e-9) -> bool:
        return self.lhs <= self.rhs + tol


def lemma_residual(
    V: Expression, constants: GozlanConstants, R: float, h: Expression, radius: float = 40.0
) -> LemmaResidual:
    """
    Both sides of
    `int h^2 dmu <= lambda1 int h'^2 / (1 + x^2) dmu + lambda2 int_{|x| <= R + 1} h^2 dmu`
    in one dimension, by quadrature.
    """
    dh = h.differentiate(1)

    def h_sq(points):
        return evaluate(h, points) ** 2

    def weighted_energy(points):
        return evaluate(dh, points) ** 2 / (1 + points[0] ** 2)

    mass = expectation(V, h_sq, m=1, radius=radius).value
    energy = expectation(V, weighted_energy, m=1, radius=radius).value
    local = expectation(V, h_sq, m=1, radius=radius, inner_radius=R + 1).value
    return LemmaResidual(lhs=mass, rhs=constants.lambda1 * energy + constants.lambda2 * local)
