"""hktrace: the sharp interpolated trace-Hardy inequality on the half-space.

Computes the optimal boundary constant H(n, beta), evaluates the
hypergeometric extremal profiles (closed form, ODE shooting, and the
harmonic integral at beta = 2), certifies the inequality on trial-function
families by half-space quadrature, and exposes the divergence-free
calibration field's flux identities.
"""

from ._core import BACKEND
from .constants import (
    Params,
    escobar_constant,
    hardy_constant,
    interior_coefficient,
    kato_constant,
    optimal_constant,
    sobolev_constant,
    unit_ball_volume,
    unit_sphere_area,
)
from .errors import (
    AxisProximityError,
    BracketError,
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    HkError,
    PoleError,
    QuadratureToleranceError,
    TestFunctionError,
)
from .extremal import (
    ExtremalProfile,
    PolarPoint,
    default_theta_max,
    f_theta,
    grad_phi,
    harmonic_rep,
    pde_residual,
    phi,
    shoot_alpha,
    w_profile,
)
from .quadrature import (
    QuadratureSpec,
    Support,
    TestFunction,
    integrate_boundary,
    integrate_halfspace,
    integrate_hemisphere,
)
from .specfun import (
    Hyp2F1Limit,
    Hyp2F1Params,
    LimitKind,
    beta,
    digamma,
    gamma,
    hyp2f1,
    hyp2f1_at_one,
    hyp2f1_derivative,
    hyp2f1_many,
    ln_gamma,
)
from .verify import (
    CalibrationField,
    EscobarResult,
    InequalityReport,
    divergence_check,
    energy,
    escobar_check,
    flux_sigma1,
    functional_j,
    hardy_term,
    mayer_slope,
    optimality_sweep,
    sphere_flux,
    trace_term,
    verify_inequality,
)

__version__ = "0.1.0"
