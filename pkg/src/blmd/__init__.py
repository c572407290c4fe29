"""Bilinear manifold-model recovery of undersampled dynamic MRI.

Pipeline pieces: phantom simulation, Cartesian/radial undersampling with
navigator rows, greedy landmark selection, sparse affine embedding,
successive-convexification recovery of the factor model U C B, and
reconstruction quality metrics.
"""

from .blmdfile import BlmdFormatError, read_blmd, write_blmd
from .embedding import (
    CompressedLandmarks,
    SelfExpression,
    compress_landmarks,
    project_affine_zero_diag,
    solve_self_expression,
)
from .errors import ConfigError
from .inner_solver import (
    SubproblemSpec,
    admissible_step,
    hermitian_lambda_max,
    project_column_sums_to_one,
    project_columns_to_ball,
    run_inner,
    soft_threshold,
)
from .landmarks import LandmarkSet, select_landmarks
from .metrics import (
    MetricsReport,
    compute_metrics,
    hfen,
    nrmse,
    nrmse_per_frame,
    sharpness_m1,
    sharpness_m2,
    ssim,
)
from .phantom import PhantomConfig, generate_phantom
from .pipeline import (
    PipelineConfig,
    PipelineError,
    config_from_dict,
    load_config,
    run_pipeline,
    zero_filled_baseline,
)
from .recovery import (
    RecoveryConfig,
    RecoveryResult,
    gamma_next,
    run_recovery,
    update_z,
)
from .sampling import (
    GOLDEN_ANGLE_DEG,
    MaskConfig,
    SamplingMask,
    cartesian_mask,
    center_spectrum,
    extract_navigators,
    radial_mask,
    uncenter_spectrum,
)
from .transforms import (
    apply_sampling,
    devectorize,
    dft2,
    dft_t,
    frobenius_inner,
    vectorize,
)

__version__ = "0.1.0"
