from lyacert.diffusion.errors import (
    InvalidConstantsError,
    LyapunovPreconditionError,
    LyapunovFitError,
)
from lyacert.diffusion.problem import (
    DiffusionProblem,
    LyapunovConstants,
    WeakLyapunovConstants,
    GridSpec,
    diffusion_generator,
    u_form,
)
from lyacert.diffusion.lyapunov import (
    Violation,
    PoincareResidual,
    generator_apply,
    lyapunov_defect,
    check_U_form,
    defect_profile,
    scan_defect,
    remark_scan,
    weighted_poincare_residual,
)
from lyacert.diffusion.fit import (
    fit_from_profile,
    fit_constants,
    derive_weak_constants,
    check_weak_form,
)
