from lyacert.moments.errors import MomentBoundError
from lyacert.moments.recursions import (
    chain_bounds,
    chain_sequence,
    gozlan_recursion_bounds,
    gozlan_sequence,
    recursion_bounds,
    recursion_sequence,
)
from lyacert.moments.envelope import (
    Envelope,
    GrowthFactor,
    envelope_from_logs,
    exp_moment_bound,
    factorial_envelope,
    growth_from_logs,
    log_exp_moment_bound,
)
from lyacert.moments.certificate import (
    MomentCertificate,
    certify,
    certify_gozlan,
    moment_table,
)
