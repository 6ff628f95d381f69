from lyacert.gozlan.errors import GozlanConstraintError, GozlanConditionError
from lyacert.gozlan.omega import (
    OmegaProperties,
    omega,
    omega_expression,
    omega_ratio,
    omega_props,
    d_omega,
    cutoff_phi,
    cutoff_derivative_bound,
)
from lyacert.gozlan.condition import (
    A_GOZLAN,
    DEFAULT_SHELLS,
    ConditionVerdict,
    ConditionCheck,
    condition_value,
    directions,
    check_condition,
)
from lyacert.gozlan.constants import (
    GozlanParameters,
    GozlanConstants,
    eps1_cap,
    dimension_margin,
    validate,
    lambda_constants,
)
from lyacert.gozlan.optimizer import (
    OptimizedParameters,
    closed_form_delta,
    limit_delta,
    optimize_parameters,
    default_parameters,
)
from lyacert.gozlan.certificate import (
    GozlanCertificate,
    LemmaResidual,
    gozlan_certificate,
    lemma_residual,
)
