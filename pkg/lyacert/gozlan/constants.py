import math
from dataclasses import dataclass, replace
from lyacert.gozlan.errors import GozlanConstraintError
from lyacert.gozlan.condition import A_GOZLAN

OMEGA_CONSTANT = 4 / 27


def eps1_cap(m: int, a: float = A_GOZLAN) -> float:
    """Upper limit of `eps1`: `1 - a - 4 (m - 1) / (27 m)`, or `4 / (27 m)` when `a = 23/27`."""
    return 1 - a - OMEGA_CONSTANT * (m - 1) / m


def dimension_margin(m: int, eps: float, eps3: float) -> float:
    """`m - 2 eps - 4 (m - 1) / (27 eps3)`; the `eps3` term vanishes for `m = 1`."""
    pole = 0.0 if m == 1 else OMEGA_CONSTANT * (m - 1) / eps3
    return m - 2 * eps - pole


@dataclass(frozen=True)
class GozlanParameters:
    m: int
    eps: float
    eps1: float
    eps2: float
    eps3: float
    R: float
    a: float = A_GOZLAN

    def with_radius(self, R: float) -> "GozlanParameters":
        return replace(self, R=R)

    def to_dict(self):
        return {
            "m": self.m,
            "eps": self.eps,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "eps3": self.eps3,
            "R": self.R,
            "a": self.a,
        }


@dataclass(frozen=True)
class GozlanConstants:
    lambda1: float
    lambda2: float
    lambda1p: float
    lambda2p: float
    delta_bound: float

    def to_dict(self):
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda1p": self.lambda1p,
            "lambda2p": self.lambda2p,
            "deltaBound": self.delta_bound,
        }


def validate(params: GozlanParameters) -> None:
    """Check the lemma's constraints one by one; the first violated one is raised."""
    cap = eps1_cap(params.m, params.a)
    if not params.eps1 < cap:
        raise GozlanConstraintError(
            "eps1_cap", f"eps1 = {params.eps1!r} must be below 1 - a - 4(m-1)/(27m) = {cap!r}."
        )
    for name in ("eps", "eps1", "eps2", "eps3", "R"):
        value = getattr(params, name)
        if not value > 0:
            raise GozlanConstraintError("positivity", f"{name} = {value!r} must be positive.")
    total = params.eps1 + 3 * params.eps2 + params.eps3
    if abs(total - (1 - params.a)) > 1e-12:
        raise GozlanConstraintError(
            "budget", f"eps1 + 3 eps2 + eps3 = {total!r} must equal 1 - a = {1 - params.a!r}."
        )
    if not dimension_margin(params.m, params.eps, params.eps3) > 0:
        raise GozlanConstraintError(
            "feasibility", "4(m-1)/(27 eps3) + 2 eps must stay below m."
        )


def lambda_constants(params: GozlanParameters) -> GozlanConstants:
    """
    `lambda1 = 1 / (eps1 D)` and `lambda2 = (m - eps + 3 / eps2) / D` with
    `D = m - 2 eps - 4 (m - 1) / (27 eps3)`; `lambda1' = lambda1 m`, `lambda2' = lambda2 (R + 1)^2`.
    """
    validate(params)
    margin = dimension_margin(params.m, params.eps, params.eps3)
    lambda1 = 1 / (params.eps1 * margin)
    lambda2 = (params.m - params.eps + 3 / params.eps2) / margin
    lambda1p = lambda1 * params.m
    return GozlanConstants(
        lambda1=lambda1,
        lambda2=lambda2,
        lambda1p=lambda1p,
        lambda2p=lambda2 * (params.R + 1) ** 2,
        delta_bound=1 / math.sqrt(lambda1p),
    )
