"""Quantum chi-square divergences and monotone metrics for standard operator monotone functions."""

from .channels import (
    KrausChannel,
    apply_channel,
    contraction_check,
    random_channel,
)
from .divergence import (
    DivergenceValue,
    chi2,
    chi2_alpha_closed,
    classical_chi2,
    metric,
)
from .errors import DomainError, NumericError, QChi2Error, SingularStateError
from .fop import (
    StandardFunction,
    WeightFunction,
    bounds_check,
    eval_f,
    from_weight,
    k_value,
    loewner_check,
    max_extremal,
    mc_value,
    min_extremal,
    parse_function_spec,
    ruskai_family,
    weight_meet_join,
    weight_order,
    wyd_family,
)
from .harness import (
    convexity_scan,
    family_scan,
    quadratic_inverse_convexity_scan,
    random_density,
)
from .kernels import BACKEND
from .linalg import (
    DensityMatrix,
    HermitianMatrix,
    Spectrum,
    apply_mc_superop,
    eigh,
    superop_matrix,
)
from .report import ScanReport

__version__ = "0.1.0"
