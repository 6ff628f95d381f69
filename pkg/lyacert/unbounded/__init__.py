from lyacert.unbounded.errors import MatrixNotPositiveDefiniteError, DivergentWeightError
from lyacert.unbounded.problem import UnboundedProblem, drift_expression, weighted_generator
from lyacert.unbounded.operator import (
    LambdaMaxEnvelope,
    UnboundedVerification,
    drift_from_A_V,
    generator_a_apply,
    lambda_max,
    lambda_max_values,
    lambda_max_envelope,
    unbounded_defect,
    verify_unbounded_lyapunov,
    bump,
    invariance_check,
    fit_unbounded_constants,
)
from lyacert.unbounded.certificate import WeightedCertificate, weighted_certificate
