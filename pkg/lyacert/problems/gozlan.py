from typing import Any, Dict, List, Optional
from loguru import logger
from overrides import overrides
from lyacert.errors import DeltaRejectedError
from lyacert.expr import parse
from lyacert.oracle import gaussian_tail_integral
from lyacert.gozlan import (
    A_GOZLAN,
    DEFAULT_SHELLS,
    GozlanConditionError,
    GozlanParameters,
    check_condition,
    gozlan_certificate,
    lemma_residual,
    optimize_parameters,
)
from lyacert.problems.base import CertificateReport, Problem, ValidationResult, verdict_section
from lyacert.problems.errors import ProblemFileError

TRUNCATIONS = (5.0, 10.0, 20.0, 40.0, 80.0)
LEMMA_TEST_FUNCTIONS = ("1", "x1", "x1^2")


@Problem.register("gozlan")
class GozlanCertification(Problem):
    """
    `{"kind": "gozlan", "m", "V", "delta", "gozlan": {"eps", "eps1", "eps2", "eps3", "a", "R"},
    "shells", "seed"}`.

    Without `eps1` and `eps3` the parameters are placed next to the optimum of
    the admissible exponent; `R` defaults to the smallest passing shell.
    """

    required = ("V",)

    def __init__(self, params: Dict[str, Any]) -> None:
        super().__init__(params)
        m = self.m
        self.V = self.expression("V", m)
        self.settings = params.get("gozlan", {})
        if not isinstance(self.settings, dict):
            raise ProblemFileError(f"gozlan must be an object, got {self.settings!r}.")
        self.a = float(self.settings.get("a", A_GOZLAN))
        self.shells = tuple(float(r) for r in params.get("shells", DEFAULT_SHELLS))

    def parameters(self, R: float) -> Optional[GozlanParameters]:
        """Explicit parameters of the file, or `None` to let the optimizer choose."""
        if "eps1" not in self.settings or "eps3" not in self.settings:
            return None
        return GozlanParameters(
            m=self.m,
            eps=float(self.settings.get("eps", 1e-3)),
            eps1=float(self.settings["eps1"]),
            eps2=float(self.settings.get("eps2", 1e-3)),
            eps3=float(self.settings["eps3"]),
            R=float(self.settings.get("R", R)),
            a=self.a,
        )

    @overrides
    def run(self, delta: float, seed: Optional[int], progress: bool) -> CertificateReport:
        m = self.m
        reasons: List[str] = []
        tables = {}
        condition = check_condition(self.V, m, shells=self.shells, a=self.a)
        tables["shells"] = condition.shells
        optimized = optimize_parameters(m, a=self.a)
        tables["optimizer"] = optimized.trace
        constants: Dict[str, Any] = {"optimizer": {**optimized.to_dict(), "source": "formula"}}
        payload: Dict[str, Any] = {"condition": condition.to_dict()}
        certified = None
        try:
            explicit = self.parameters(condition.R) if condition.passed else None
            certified = gozlan_certificate(
                self.V,
                m,
                delta,
                params=explicit,
                n_max=int(self.option("n_max", 20)),
                a=self.a,
                condition=condition,
            )
        except (GozlanConditionError, DeltaRejectedError) as error:
            reasons.append(str(error.message))
        else:
            payload = certified.to_dict()
            constants.update(
                {**certified.constants.to_dict(), "params": certified.params.to_dict()}
            )
            constants["source"] = "formula"
        oracle: Dict[str, Any] = {}
        if m <= 2 or seed is not None:
            truncations = tuple(self.option("truncations", TRUNCATIONS))
            tail = gaussian_tail_integral(self.V, delta, truncations=truncations, m=m, seed=seed)
            oracle["gaussian_tail"] = tail.to_dict()
            bound = certified.certificate.exp_bound if certified is not None else None
            if bound is not None and tail.is_finite and tail.value > bound:
                logger.bind(discrepancy="exp_bound").warning(
                    f"Oracle value {tail.value!r} exceeds the certified bound {bound!r}."
                )
        if m == 1 and certified is not None:
            oracle["lemma"] = []
            for text in LEMMA_TEST_FUNCTIONS:
                residual = lemma_residual(
                    self.V, certified.constants, certified.params.R, parse(text, 1)
                )
                oracle["lemma"].append(
                    {"h": text, **residual._asdict(), "holds": residual.holds(), "source": "oracle"}
                )
        return CertificateReport(
            problem=dict(self.params),
            constants=constants,
            certificate=verdict_section(reasons, {"delta": delta, **payload}),
            oracle=oracle,
            violations=[],
            provenance={"shells": list(self.shells), "a": self.a},
            tables=tables,
        )

    @overrides
    def validate(self, report: CertificateReport) -> ValidationResult:
        condition = check_condition(self.V, self.m, shells=self.shells, a=self.a)
        delta = report.provenance.get("delta", self.delta)
        bound = report.constants.get("deltaBound")
        accepted = condition.passed and bound is not None and delta < bound
        reported = report.certificate.get("condition", {}).get("verdict")
        details = {
            "condition": condition.verdict.value,
            "reported_condition": reported,
            "accepted": accepted,
            "reported_accepted": report.accepted,
        }
        return ValidationResult(
            accepted == report.accepted and condition.verdict.value == reported, details
        )
