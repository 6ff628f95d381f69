from lyacert.oracle.report import OracleReport, Verdict, divergent
from lyacert.oracle.metropolis import mc_expectation
from lyacert.oracle.quadrature import (
    adaptive_simpson,
    integrate_1d,
    expectation,
    gaussian_tail_integral,
)
from lyacert.oracle.series import series_sum, tail_slope
from lyacert.oracle.audit import AuditResult, finite_diff_audit, random_expression, audit_random
