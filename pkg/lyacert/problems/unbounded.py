from typing import Any, Dict, List, Optional
import math
from overrides import overrides
from lyacert.errors import DeltaRejectedError
from lyacert.expr import Expression, parse
from lyacert.diffusion import LyapunovConstants, LyapunovFitError
from lyacert.unbounded import (
    DivergentWeightError,
    UnboundedProblem,
    fit_unbounded_constants,
    invariance_check,
    lambda_max_envelope,
    verify_unbounded_lyapunov,
    weighted_certificate,
)
from lyacert.problems.base import (
    CertificateReport,
    Problem,
    ValidationResult,
    verdict_section,
    violation_points,
)
from lyacert.problems.errors import ProblemFileError


@Problem.register("unbounded")
class UnboundedCertification(Problem):
    """
    `{"kind": "unbounded", "m", "A", "V", "W", "x0", "grid", "delta", "c", "b", "seed"}`.

    `A` is the upper triangle of the diffusion matrix, row by row: row `i` holds
    `m - i` expressions. A full `m x m` matrix is accepted as well.
    """

    required = ("A", "V", "W")

    def __init__(self, params: Dict[str, Any]) -> None:
        super().__init__(params)
        m = self.m
        rows = params["A"]
        if isinstance(rows, str):
            rows = [[rows]]
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise ProblemFileError(f"A must be a list of rows of expressions, got {rows!r}.")
        upper = []
        for row in rows:
            upper.append([self.parse_entry(entry, m) for entry in row])
        self.problem = UnboundedProblem.from_upper(upper, self.expression("V", m), m, self.x0(m))
        self.W = self.expression("W", m)
        self.grid_spec = self.grid(m)
        self.tol = float(self.option("tol", 1e-9))

    def parse_entry(self, entry: Any, m: int) -> Expression:
        if isinstance(entry, (int, float)):
            entry = repr(float(entry))
        if not isinstance(entry, str):
            raise ProblemFileError(f"Matrix entry {entry!r} must be an expression string.")
        return parse(entry, m)

    def constants(self):
        if "c" in self.params and "b" in self.params:
            k = LyapunovConstants(c=float(self.params["c"]), b=float(self.params["b"]))
            verification = verify_unbounded_lyapunov(
                self.problem, self.W, k, self.grid_spec, tol=self.tol
            )
            return k, verification, "problem"
        k, verification = fit_unbounded_constants(
            self.problem, self.W, self.grid_spec, tol=self.tol
        )
        return k, verification, "fit"

    @overrides
    def run(self, delta: float, seed: Optional[int], progress: bool) -> CertificateReport:
        p = self.problem
        p.check_positive_definite(self.grid_spec.points(p.m))
        provenance = {"grid": self.grid_spec.to_dict()}
        try:
            k, verification, source = self.constants()
        except LyapunovFitError as error:
            return CertificateReport(
                problem=dict(self.params),
                constants={},
                certificate=verdict_section([str(error.message)], {"delta": delta}),
                oracle={},
                violations=[],
                provenance=provenance,
            )
        reasons: List[str] = []
        if not verification.passed:
            count = len(verification.violations)
            reasons.append(f"Weighted Lyapunov condition violated at {count} grid points.")
        envelope = lambda_max_envelope(p, self.grid_spec)
        constants = {
            "c": k.c,
            "b": k.b,
            "source": source,
            "max_defect": verification.max_defect,
            "lambda_max": {
                "pointwise_max": float(envelope.pointwise.max()),
                "conservative_max": float(envelope.conservative.max()),
                "source": "scan",
            },
        }
        oracle: Dict[str, Any] = {}
        payload: Dict[str, Any] = {"threshold": math.sqrt(k.c)}
        tables = {}
        try:
            certified = weighted_certificate(
                p, k, delta, n_max=int(self.option("n_max", 20)), seed=seed
            )
        except (DeltaRejectedError, DivergentWeightError) as error:
            reasons.append(str(error.message))
        else:
            payload = certified.to_dict()
            oracle["mu_lambda_max"] = certified.mass.to_dict()
            if certified.tail is not None:
                oracle["weighted_tail"] = certified.tail.to_dict()
        if p.m <= 2:
            invariance = invariance_check(p)
            tables["invariance"] = invariance
            rows = invariance.to_dict(orient="records")
            oracle["invariance"] = {"rows": rows, "source": "oracle"}
        return CertificateReport(
            problem=dict(self.params),
            constants=constants,
            certificate=verdict_section(reasons, {"delta": delta, **payload}),
            oracle=oracle,
            violations=[violation.to_dict() for violation in verification.violations],
            provenance=provenance,
            tables=tables,
        )

    @overrides
    def validate(self, report: CertificateReport) -> ValidationResult:
        if not report.constants:
            return ValidationResult(not report.accepted, {"constants": None})
        k = LyapunovConstants(c=report.constants["c"], b=report.constants["b"])
        verification = verify_unbounded_lyapunov(
            self.problem, self.W, k, self.grid_spec, tol=self.tol
        )
        violations = [violation.to_dict() for violation in verification.violations]
        delta = report.provenance.get("delta", self.delta)
        accepted = verification.passed and delta < math.sqrt(k.c)
        same_points = violation_points(violations) == violation_points(report.violations)
        details = {
            "violations": len(violations),
            "reported_violations": len(report.violations),
            "accepted": accepted,
            "reported_accepted": report.accepted,
        }
        return ValidationResult(same_points and accepted == report.accepted, details)
