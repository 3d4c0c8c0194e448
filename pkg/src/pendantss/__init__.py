"""PENDANTSS: joint trend removal and sparse blind deconvolution.

Decomposes a peaked 1-D signal into a nonnegative spike train, a
unit-simplex convolution kernel and a slowly varying baseline, using a
trust-region block-alternating variable-metric forward-backward solver
with smoothed lp/lq norm-ratio (SOOT/SPOQ) sparsity penalties.
"""

from ._validation import check_kernel, check_signal
from .benchmark import (
    BenchmarkResult,
    ExperimentConfig,
    RealizationRow,
    TuningResult,
    run_benchmark,
    score_decomposition,
    select_cutoff,
    tune_hyperparams,
)
from .convolution import (
    adjoint_convolve_kernel,
    adjoint_convolve_signal,
    convolve_same,
    shift_kernel,
)
from .estimator import Pendantss
from .fidelity import (
    HighPassFilter,
    LipschitzEstimationError,
    fidelity,
    fidelity_grad_kernel,
    fidelity_grad_signal,
    largest_eigenvalue,
    lipschitz_kernel,
    lipschitz_signal,
)
from .majorize import chi_constant, in_ball_complement, majorant_value, mm_metric_diag
from .metrics import (
    MetricsReport,
    SNR_CAP_DB,
    composite_score,
    kernel_snr_aligned,
    snr,
    tsnr,
)
from .penalties import (
    SpoqParams,
    lp_smooth,
    lq_smooth,
    spoq_penalty,
    spoq_penalty_grad,
)
from .projections import project_nonneg, project_simplex
from .simulate import (
    GroundTruth,
    gaussian_kernel,
    lowfreq_trend,
    make_dataset,
    make_observation,
    spike_train,
)
from .solver import (
    Decomposition,
    SolverConfig,
    default_init_kernel,
    default_init_signal,
    estimate_trend,
    kernel_step,
    objective,
    recenter,
    signal_step,
    solve,
    tr_radii,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkResult",
    "Decomposition",
    "ExperimentConfig",
    "GroundTruth",
    "HighPassFilter",
    "LipschitzEstimationError",
    "MetricsReport",
    "Pendantss",
    "RealizationRow",
    "SNR_CAP_DB",
    "SolverConfig",
    "SpoqParams",
    "TuningResult",
    "adjoint_convolve_kernel",
    "adjoint_convolve_signal",
    "check_kernel",
    "check_signal",
    "chi_constant",
    "composite_score",
    "convolve_same",
    "default_init_kernel",
    "default_init_signal",
    "estimate_trend",
    "fidelity",
    "fidelity_grad_kernel",
    "fidelity_grad_signal",
    "gaussian_kernel",
    "in_ball_complement",
    "kernel_snr_aligned",
    "kernel_step",
    "largest_eigenvalue",
    "lipschitz_kernel",
    "lipschitz_signal",
    "lowfreq_trend",
    "lp_smooth",
    "lq_smooth",
    "majorant_value",
    "make_dataset",
    "make_observation",
    "mm_metric_diag",
    "objective",
    "project_nonneg",
    "project_simplex",
    "recenter",
    "run_benchmark",
    "score_decomposition",
    "select_cutoff",
    "shift_kernel",
    "signal_step",
    "snr",
    "solve",
    "spike_train",
    "spoq_penalty",
    "spoq_penalty_grad",
    "tr_radii",
    "tsnr",
    "tune_hyperparams",
]
