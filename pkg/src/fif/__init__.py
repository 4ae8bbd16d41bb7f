"""Fractal interpolation with sigmoidal quasi-interpolation heights."""

from .analysis import (
    DimensionReport,
    HolderParams,
    box_counting_dimension,
    error_bound_alpha,
    error_bound_discrete,
    holder_norm,
    holder_seminorm,
    knot_data_collinear,
    modulus_of_continuity,
    sup_norm_diff,
    theoretical_box_dimension,
)
from .errors import (
    CrossCheckError,
    FifError,
    InvalidConfig,
    MatchingConditionError,
    NonConvergence,
)
from .fractal import (
    FifProblem,
    FifResult,
    chaos_game_render,
    rb_apply,
    solve_fif,
    solve_fif_discrete,
    solve_fif_smooth,
)
from .kernels import (
    SigmoidalKernel,
    kernel_from_name,
    ramp,
    sigma_eval,
    smooth_bump,
    smoothstep,
    xi_derivative,
    xi_eval,
)
from .maps import AffineMap, Partition, ScalingVector
from .operators import (
    FunctionInput,
    OperatorConfig,
    nn_eval,
    nn_eval_derivative,
    nn_eval_four_layer,
)
from .registry import make_function
from .sampled import SampledFunction

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "CrossCheckError",
    "DimensionReport",
    "FifError",
    "FifProblem",
    "FifResult",
    "FunctionInput",
    "HolderParams",
    "InvalidConfig",
    "MatchingConditionError",
    "NonConvergence",
    "OperatorConfig",
    "Partition",
    "SampledFunction",
    "ScalingVector",
    "SigmoidalKernel",
    "box_counting_dimension",
    "chaos_game_render",
    "error_bound_alpha",
    "error_bound_discrete",
    "holder_norm",
    "holder_seminorm",
    "kernel_from_name",
    "knot_data_collinear",
    "make_function",
    "modulus_of_continuity",
    "nn_eval",
    "nn_eval_derivative",
    "nn_eval_four_layer",
    "ramp",
    "rb_apply",
    "sigma_eval",
    "smooth_bump",
    "smoothstep",
    "solve_fif",
    "solve_fif_discrete",
    "solve_fif_smooth",
    "sup_norm_diff",
    "theoretical_box_dimension",
    "xi_derivative",
    "xi_eval",
]
