from typing import Any, Dict, List, Optional
import math
from loguru import logger
from overrides import overrides
from dataclasses import asdict
from lyacert.errors import DeltaRejectedError
from lyacert.expr import FunctionCall, parse
from lyacert.oracle import expectation, gaussian_tail_integral
from lyacert.moments import MomentCertificate, certify, moment_table
from lyacert.diffusion import (
    DiffusionProblem,
    LyapunovConstants,
    LyapunovFitError,
    Violation,
    derive_weak_constants,
    fit_constants,
    remark_scan,
    scan_defect,
    weighted_poincare_residual,
)
from lyacert.problems.base import (
    CertificateReport,
    Problem,
    ValidationResult,
    verdict_section,
    violation_points,
)
from lyacert.problems.errors import ProblemFileError

TRUNCATIONS = (5.0, 10.0, 20.0, 40.0, 80.0, 160.0)
POINCARE_TEST_FUNCTIONS = ("1", "x1", "x1^2")


@Problem.register("diffusion")
class DiffusionCertification(Problem):
    """
    `{"kind": "diffusion", "m", "V", "W" | "U", "x0", "grid", "delta", "c", "b", "seed"}`.

    Without `c` and `b` the constants are fitted on the grid; given constants are
    scanned instead. `W` defaults to `exp(U)` when only `U` is present.
    """

    required = ("V",)

    def __init__(self, params: Dict[str, Any]) -> None:
        super().__init__(params)
        if "W" not in params and "U" not in params:
            raise ProblemFileError("A diffusion problem needs W or its logarithm U.")
        m = self.m
        self.problem = DiffusionProblem(self.expression("V", m), m, self.x0(m))
        self.U = self.expression("U", m)
        self.W = self.expression("W", m) or FunctionCall("exp", self.U)
        self.grid_spec = self.grid(m)
        self.tol = float(self.option("tol", 1e-9))

    def given_constants(self) -> Optional[LyapunovConstants]:
        if "c" in self.params and "b" in self.params:
            return LyapunovConstants(c=float(self.params["c"]), b=float(self.params["b"]))
        return None

    def constants(self):
        given = self.given_constants()
        if given is not None:
            return given, self.scan(given), "problem"
        k, violations = fit_constants(self.problem, self.W, self.grid_spec, tol=self.tol)
        return k, violations, "fit"

    def scan(self, k: LyapunovConstants) -> List[Violation]:
        return scan_defect(self.problem, self.W, k, self.grid_spec, tol=self.tol)

    @property
    def with_oracle(self) -> bool:
        return self.problem.m <= 2

    @overrides
    def run(self, delta: float, seed: Optional[int], progress: bool) -> CertificateReport:
        p = self.problem
        reasons: List[str] = []
        oracle: Dict[str, Any] = {}
        tables = {}
        try:
            k, violations, source = self.constants()
        except LyapunovFitError as error:
            return CertificateReport(
                problem=dict(self.params),
                constants={},
                certificate=verdict_section([str(error.message)], {"delta": delta}),
                oracle={},
                violations=[],
                provenance={"grid": self.grid_spec.to_dict()},
            )
        if violations:
            reasons.append(f"Lyapunov condition violated at {len(violations)} grid points.")
        weak = derive_weak_constants(k, p, self.W, self.grid_spec)
        constants = {
            "c": k.c,
            "b": k.b,
            "source": source,
            "weak": {**asdict(weak), "source": "scan"},
        }
        certificate: Optional[MomentCertificate] = None
        try:
            certificate = certify(k.c, k.b, delta, n_max=int(self.option("n_max", 20)))
        except DeltaRejectedError as error:
            reasons.append(str(error.message))
        run_oracle = self.with_oracle or seed is not None
        if run_oracle:
            truncations = tuple(self.option("truncations", TRUNCATIONS))
            tail = gaussian_tail_integral(
                p.V, delta, x0=p.x0, truncations=truncations, m=p.m, seed=seed
            )
            oracle["gaussian_tail"] = tail.to_dict()
            if certificate is not None and tail.is_finite and tail.value > certificate.exp_bound:
                logger.bind(discrepancy="exp_bound").warning(
                    f"Oracle value {tail.value!r} exceeds the certified bound "
                    f"{certificate.exp_bound!r}."
                )
            oracle["poincare"] = []
            for text in POINCARE_TEST_FUNCTIONS:
                residual = weighted_poincare_residual(p, parse(text, p.m), k, seed=seed)
                oracle["poincare"].append(
                    {"h": text, **residual._asdict(), "holds": residual.holds(), "source": "oracle"}
                )
        if self.U is not None:
            table = remark_scan(p, self.U, k)
            tables["u_form_scan"] = table
            oracle["u_form_scan"] = {"rows": table.to_dict(orient="records"), "source": "scan"}
        if certificate is not None:
            moments = self.oracle_moments(seed) if run_oracle else None
            tables["moments"] = moment_table(certificate, moments)
            payload = certificate.to_dict()
        else:
            payload = {"threshold": math.sqrt(k.c)}
        return CertificateReport(
            problem=dict(self.params),
            constants=constants,
            certificate=verdict_section(reasons, {"delta": delta, **payload}),
            oracle=oracle,
            violations=[violation.to_dict() for violation in violations],
            provenance={"grid": self.grid_spec.to_dict()},
            tables=tables,
        )

    def oracle_moments(self, seed: Optional[int], n_max: int = 8) -> List[float]:
        """`E d^{2n}` for `n = 0..n_max` by the expectation oracle."""
        p = self.problem
        values = []
        for n in range(n_max + 1):
            report = expectation(
                p.V, lambda points, n=n: p.distance_sq(points) ** n, m=p.m, x0=p.x0, seed=seed
            )
            values.append(report.value)
        return values

    @overrides
    def validate(self, report: CertificateReport) -> ValidationResult:
        if not report.constants:
            return ValidationResult(not report.accepted, {"constants": None})
        k = LyapunovConstants(c=report.constants["c"], b=report.constants["b"])
        violations = [violation.to_dict() for violation in self.scan(k)]
        delta = report.provenance.get("delta", self.delta)
        admissible = delta < math.sqrt(k.c)
        same_points = violation_points(violations) == violation_points(report.violations)
        accepted = admissible and not violations
        details = {
            "violations": len(violations),
            "reported_violations": len(report.violations),
            "accepted": accepted,
            "reported_accepted": report.accepted,
        }
        return ValidationResult(same_points and accepted == report.accepted, details)
