from typing import Any, Dict, List, Optional
import numpy as np
from loguru import logger
from overrides import overrides
from lyacert.utils import finite_or_none
from lyacert.jump import (
    BirthDeathChain,
    Boundedness,
    DivergentMeasureError,
    Rule,
    carre_du_champ_rho,
    convergence_threshold,
    delta_search,
    fit_jump_lyapunov,
    gaussian_series,
    generator_ratio,
    jump_metric_K,
    parse_rule,
    series_table,
)
from lyacert.problems.base import CertificateReport, Problem, ValidationResult, verdict_section
from lyacert.problems.errors import ProblemFileError


@Problem.register("jump")
class JumpCertification(Problem):
    """
    `{"kind": "jump", "birth", "death", "birth_overrides", "W", "log_weight", "i_range",
    "i_max", "delta", "c", "b", "claimed_delta"}`.

    Rates and `W` are expressions in the index `i` or tabulated arrays. With
    `log_weight` the field `W` holds `log W`, e.g. `i * log(2)` for `W = 2^i`.
    """

    required = ("birth", "death", "W")

    def __init__(self, params: Dict[str, Any]) -> None:
        super().__init__(params)
        birth_overrides = params.get("birth_overrides", {})
        if not isinstance(birth_overrides, dict):
            raise ProblemFileError(f"birth_overrides must be an object, got {birth_overrides!r}.")
        self.chain = BirthDeathChain(
            self.rule("birth"),
            self.rule("death"),
            {int(index): float(rate) for index, rate in birth_overrides.items()},
        )
        self.W = self.rule("W")
        self.log_weight = bool(params.get("log_weight", False))
        i_range = params.get("i_range", [10, 10 ** 6])
        if not isinstance(i_range, list) or len(i_range) != 2 or not 1 <= i_range[0] < i_range[1]:
            raise ProblemFileError(f"i_range must be [lo, hi] with 1 <= lo < hi, got {i_range!r}.")
        self.i_range = (int(i_range[0]), int(i_range[1]))
        self.i_max = int(params.get("i_max", 10 ** 6))
        self.horizon = int(self.option("metric_horizon", 10 ** 4))
        self.tol = float(self.option("tol", 1e-9))

    def rule(self, name: str) -> Rule:
        value = self.params[name]
        if isinstance(value, str):
            return parse_rule(value)
        if isinstance(value, list) and all(isinstance(v, (int, float)) for v in value):
            return np.asarray(value, dtype=float)
        raise ProblemFileError(f"{name} must be an expression in i or a list of numbers.")

    def check_given(self, c: float, b: float) -> List[Dict[str, Any]]:
        """Indices of `[0, i_hi]` where `L_nu W / W + c rho^2 - b` exceeds the tolerance."""
        i_hi = self.i_range[1]
        idx = np.arange(i_hi + 1)
        ratio = generator_ratio(self.chain, self.W, idx, log_weight=self.log_weight)
        defect = ratio + c * self.chain.rho(i_hi) ** 2 - b
        bad = np.flatnonzero(defect > self.tol * max(1.0, b))
        return [{"point": [int(i)], "defect": float(defect[i])} for i in bad]

    @overrides
    def run(self, delta: float, seed: Optional[int], progress: bool) -> CertificateReport:
        ch = self.chain
        reasons: List[str] = []
        violations: List[Dict[str, Any]] = []
        tables = {}
        metric = jump_metric_K(ch, i_max=self.horizon)
        if metric.verdict != Boundedness.BOUNDED:
            reasons.append(
                f"Jump metric increments are {metric.verdict.value} up to i = {metric.horizon}."
            )
        fit = fit_jump_lyapunov(ch, self.W, i_range=self.i_range, log_weight=self.log_weight)
        tables["profile"] = fit.profile
        if "c" in self.params and "b" in self.params:
            c, b, source = float(self.params["c"]), float(self.params["b"]), "problem"
            violations = self.check_given(c, b)
            if violations:
                reasons.append(f"Lyapunov condition violated at {len(violations)} indices.")
        else:
            c, b, source = fit.c, fit.b, "fit"
            if not fit.passed:
                reasons.append(
                    f"No c > 0: -L W / (W rho^2) decays to {fit.intercept:.4g} "
                    f"from a tail infimum of {fit.tail_min:.4g}."
                )
        constants = {
            "c": c,
            "b": b,
            "source": source,
            "K": {**metric.to_dict(), "source": "scan"},
            "tail_min": fit.tail_min,
            "intercept": fit.intercept,
        }
        payload: Dict[str, Any] = {}
        if c > 0 and metric.verdict == Boundedness.BOUNDED:
            admissibility = delta_search(c, metric.K)
            payload = {**admissibility.to_dict(), "threshold": admissibility.delta_star}
            if delta >= admissibility.delta_star:
                reasons.append(
                    f"delta = {delta!r} is not below the admissible "
                    f"delta* = {admissibility.delta_star!r}."
                )
        oracle: Dict[str, Any] = {}
        try:
            series = gaussian_series(ch, delta, i_max=self.i_max, progress=progress)
        except DivergentMeasureError as error:
            reasons.append(str(error.message))
        else:
            oracle["gaussian_series"] = series.to_dict()
            if series.is_divergent:
                if not reasons and delta < payload.get("threshold", 0.0):
                    logger.bind(discrepancy="jump_series").warning(
                        f"Series oracle diverges at the admissible delta = {delta!r}."
                    )
                reasons.append(f"Series oracle diverges at delta = {delta!r}.")
            tables["series"] = series_table(ch, delta, self.i_max)
            if "claimed_delta" in self.params:
                thresholds = convergence_threshold(
                    ch, i_max=self.i_max, claimed=float(self.params["claimed_delta"])
                )
                tables["threshold"] = thresholds
                oracle["threshold"] = {
                    "value": finite_or_none(thresholds.attrs["threshold"]),
                    "rows": thresholds.to_dict(orient="records"),
                    "source": "oracle",
                }
        _, sup = carre_du_champ_rho(ch, self.horizon)
        oracle["carre_du_champ_sup"] = {"value": sup, "horizon": self.horizon, "source": "scan"}
        return CertificateReport(
            problem=dict(self.params),
            constants=constants,
            certificate=verdict_section(reasons, {"delta": delta, **payload}),
            oracle=oracle,
            violations=violations,
            provenance={"i_range": list(self.i_range), "i_max": self.i_max, **ch.describe()},
            tables=tables,
        )

    @overrides
    def validate(self, report: CertificateReport) -> ValidationResult:
        c, b = report.constants["c"], report.constants["b"]
        delta = report.provenance.get("delta", self.delta)
        metric = jump_metric_K(self.chain, i_max=self.horizon)
        bounded = metric.verdict == Boundedness.BOUNDED
        violations = self.check_given(c, b) if report.constants["source"] == "problem" else []
        admissible = c > 0 and bounded and delta < delta_search(c, metric.K).delta_star
        series = report.oracle.get("gaussian_series")
        series_ok = series is not None and series["verdict"] != "divergent"
        accepted = admissible and not violations and series_ok
        details = {
            "K": metric.K,
            "violations": len(violations),
            "accepted": accepted,
            "reported_accepted": report.accepted,
        }
        return ValidationResult(
            accepted == report.accepted and len(violations) == len(report.violations), details
        )
