from lyacert.jump.errors import ChainDefinitionError, DivergentMeasureError, AdmissibilityError
from lyacert.jump.chain import BirthDeathChain, Rule, parse_rule, rule_values
from lyacert.jump.lyapunov import (
    JumpLyapunovFit,
    generator_nu_values,
    generator_nu_apply,
    generator_ratio,
    fit_jump_lyapunov,
)
from lyacert.jump.measure import (
    StationaryMeasure,
    stationary_measure,
    gaussian_series,
    series_table,
    convergence_threshold,
    dirichlet_form,
    generator_pairing,
)
from lyacert.jump.metric import (
    Boundedness,
    JumpMetric,
    intrinsic_rho,
    squared_increments,
    jump_metric_K,
    carre_du_champ_rho,
)
from lyacert.jump.admissibility import (
    JumpAdmissibility,
    eta1,
    eta2,
    best_cutoff,
    admissibility_sum,
    delta_search,
)
