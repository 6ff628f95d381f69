from typing import Any, Dict, NamedTuple
import math
from enum import Enum


class Verdict(str, Enum):
    FINITE = "finite"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"


class OracleReport(NamedTuple):
    """
    Independently computed numerical value with its convergence verdict.

    `value` is NaN when the verdict is divergent and infinite when it overflows
    double precision; the log-value is then kept in `evidence`. `evidence` holds the
    truncation sequence, partial sums or sample statistics backing the verdict.
    """

    value: float
    error_estimate: float
    verdict: Verdict
    evidence: Dict[str, Any]

    @property
    def is_finite(self) -> bool:
        return self.verdict == Verdict.FINITE

    @property
    def is_divergent(self) -> bool:
        return self.verdict == Verdict.DIVERGENT

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value if math.isfinite(self.value) else None,
            "error_estimate": self.error_estimate,
            "verdict": self.verdict.value,
            "evidence": self.evidence,
            "source": "oracle",
        }


def divergent(evidence: Dict[str, Any]) -> OracleReport:
    return OracleReport(math.nan, math.inf, Verdict.DIVERGENT, evidence)
