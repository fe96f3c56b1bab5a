"""Composite convex optimization with adaptive regularization and
gradient-mapping-norm restarts, plus a desk-scale benchmark harness."""

from .bounds import (
    HebParams,
    ada_apg_bound,
    eps_star,
    n_bound,
    sigma_bar,
    sigma_star_value,
    sigma_threshold,
)
from .core import (
    CompositeProblem,
    OracleCounters,
    OracleError,
    Regularizer,
    SafeguardExceeded,
    SmoothOracle,
    SolverParams,
    combine,
    inner_product,
    norm,
    phi,
)
from .engine import ApgStepOutput, EstimateState, apg_step, estimate_min, pg_step, solve_a
from .mapping import (
    MapResult,
    apg_conditions,
    descent_condition,
    model_value,
    prox_grad_point,
    reg_prox_grad_point,
)
from .prox import (
    AugmentedRegularizer,
    augmented_prox,
    l1_regularizer,
    l2norm_regularizer,
    norm_power_regularizer,
    prox_l1,
    prox_l2norm,
    prox_norm_power,
    prox_zero,
    zero_regularizer,
)
from .rates import RateFit, fit_rate
from .solvers import (
    CONVERGED,
    SAFEGUARD,
    AdaApgResult,
    RAdaApgResult,
    RestartRecord,
    ada_apg,
    apg_fixed_sigma,
    choose_sigma0,
    choose_sigma0_heb,
    pg_solve,
    r_ada_apg,
)
from .testbed import (
    HebProblem,
    dist_to_opt,
    make_lasso,
    make_norm_power_nonsmooth,
    make_quadratic,
    make_sharp,
    make_smooth_power,
    phi_opt,
    reference_solve,
    sample_level_set,
)
from .trace import TraceRecord, export_trace, load_trace

__version__ = "0.1.0"
