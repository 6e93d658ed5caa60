"""Reproducing-kernel boundary behaviour: composition factors, approach
regions and Julia-Caratheodory type estimates, checked on finite samples."""

from .core import (
    Domain,
    Kernel,
    Point,
    SelfMap,
    compose_kernel,
    compose_maps,
    diagonal,
    eval_kernel,
    exp_kernel,
    inner,
    normalized_section,
    ones_kernel,
    p_metric,
    power_kernel,
    product_kernel,
    quotient_kernel,
    zero_kernel,
)
from .errors import *  # noqa: F401,F403
from .numerics import (
    GramReport,
    SampleNorm,
    comp_symbol_norm_est,
    gram,
    multiplier_norm_est,
    psd_report,
    sample_norm_sq,
    weak_limit_probe,
)
from .sampling import Sample, default_probes, grid_g16, make_sample, quasi_random_sample
from .boundary import (
    ApproachRegion,
    BoundaryPoint,
    boundary_point,
    classify_limit,
    e_member,
    gamma_member,
    growth_restriction_check,
    make_sequence,
    nested_samples,
    regularity_check,
)
from .julia import (
    FactorVerdict,
    JCReport,
    build_q_xi,
    certify_factor,
    detect_lambda,
    estimate_c,
    iterate_to_boundary,
    jc_report,
    julia_inclusion_check,
    sandwich_check,
    transitivity_check,
)
from .classical import (
    ball_quotient,
    koranyi_sequence,
    numeric_derivative,
    numeric_gradient,
    weighted_derivative_check,
    weighted_difference_quotient,
)

__version__ = "0.1.0"
