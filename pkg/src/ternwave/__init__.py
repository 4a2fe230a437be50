"""ternwave: ternary unitary-circuit wavelets, a CDF-9/7 baseline, and an
MS-SSIM compression benchmark harness."""

from .common import (
    Wavelet,
    TernwaveError,
    InvalidArgumentError,
    TooShortError,
    DecodeError,
    UnattainableQualityError,
    ConvergenceFailure,
)
from .ternary1d import (
    Cascade,
    ExtensionKind,
    TernaryCircuitSpec,
    LevelPlan,
    Subbands1D,
    TYPE_I,
    TYPE_II,
    MIN_OPEN_LENGTH,
    minimum_multi_length,
    plan_level,
    forward_periodic,
    forward_open,
    inverse_open,
    symmetric_extension_oracle,
    forward_multi,
    inverse_multi,
)
from .cdf97 import (
    LiftingScheme97,
    DEFAULT_SCHEME,
    MIN_LENGTH_97,
    Pyramid97,
    forward_level_97,
    inverse_level_97,
    forward_multi_97,
    inverse_multi_97,
)
from .image2d import (
    ImagePlanes,
    Pyramid2D,
    rgb_to_ycbcr,
    ycbcr_to_rgb,
    forward2d,
    inverse2d,
    min_axis_length,
    spec_for,
)
from .metrics import (
    MsSsimParams,
    ssim_map,
    ssim,
    ms_ssim,
    downsample_dyadic,
    psnr,
)
from .compression import (
    QualityTarget,
    CompressionResult,
    BenchmarkRecord,
    threshold_keep_m,
    reconstruct_at_m,
    min_coeffs_for_quality,
    relative_performance,
)
from .design import (
    CenteredSequence,
    SequenceSet,
    MomentConstraint,
    MomentConstraintSet,
    default_constraints,
    extract_sequences,
    moment,
    is_trivial_constraint,
    verify_angles,
    solve_angles,
    render_function,
)
from .costmeter import (
    CostReport,
    mu_ternary_level,
    mu_cdf_level,
    mu_image_total,
    instrument_transform,
)

__version__ = "0.1.0"

__all__ = [
    "Wavelet",
    "TernwaveError",
    "InvalidArgumentError",
    "TooShortError",
    "DecodeError",
    "UnattainableQualityError",
    "ConvergenceFailure",
    "Cascade",
    "ExtensionKind",
    "TernaryCircuitSpec",
    "LevelPlan",
    "Subbands1D",
    "TYPE_I",
    "TYPE_II",
    "MIN_OPEN_LENGTH",
    "minimum_multi_length",
    "plan_level",
    "forward_periodic",
    "forward_open",
    "inverse_open",
    "symmetric_extension_oracle",
    "forward_multi",
    "inverse_multi",
    "LiftingScheme97",
    "DEFAULT_SCHEME",
    "MIN_LENGTH_97",
    "Pyramid97",
    "forward_level_97",
    "inverse_level_97",
    "forward_multi_97",
    "inverse_multi_97",
    "ImagePlanes",
    "Pyramid2D",
    "rgb_to_ycbcr",
    "ycbcr_to_rgb",
    "forward2d",
    "inverse2d",
    "min_axis_length",
    "spec_for",
    "MsSsimParams",
    "ssim_map",
    "ssim",
    "ms_ssim",
    "downsample_dyadic",
    "psnr",
    "QualityTarget",
    "CompressionResult",
    "BenchmarkRecord",
    "threshold_keep_m",
    "reconstruct_at_m",
    "min_coeffs_for_quality",
    "relative_performance",
    "CenteredSequence",
    "SequenceSet",
    "MomentConstraint",
    "MomentConstraintSet",
    "default_constraints",
    "extract_sequences",
    "moment",
    "is_trivial_constraint",
    "verify_angles",
    "solve_angles",
    "render_function",
    "CostReport",
    "mu_ternary_level",
    "mu_cdf_level",
    "mu_image_total",
    "instrument_transform",
    "__version__",
]
