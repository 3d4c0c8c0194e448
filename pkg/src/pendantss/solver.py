"""Trust-region block-alternating variable-metric forward-backward solver.

Minimizes ``fidelity(s, pi) + lam * penalty(s)`` over nonnegative spike
trains s and unit-simplex kernels pi by alternating:

  signal update
      variable-metric forward-backward step with a diagonal
      majorize-minimize metric, validated by a shrinking lq-ball
      trust-region test (last radius is 0, so acceptance is guaranteed);
  kernel update
      projected gradient step onto the simplex with the scalar metric
      given by the kernel-block Lipschitz bound.

The loop stops once the signal iterate moves less than ``epsilon`` in
Euclidean norm or the iteration cap is reached.  The trend is then
recovered through the low-pass complement of the peak-free residual,
and the usual integer translation ambiguity of blind deconvolution is
removed by recentering the kernel on its peak.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_kernel, check_signal
from .convolution import convolve_same, shift_kernel
from .fidelity import (
    fidelity,
    fidelity_grad_kernel,
    fidelity_grad_signal,
    lipschitz_kernel,
    lipschitz_signal,
)
from .majorize import in_ball_complement, mm_metric_diag
from .penalties import spoq_penalty, spoq_penalty_grad
from .projections import project_nonneg, project_simplex

STOP_TOLERANCE = "tolerance"
STOP_ITERATION_CAP = "iteration_cap"

GAMMA_MIN = 0.01
GAMMA_MAX = 1.99


@dataclass(frozen=True)
class SolverConfig:
    """Step sizes, trust-region schedule and stopping rules.

    ``epsilon = None`` resolves to ``1e-6 * sqrt(N)`` at solve time.
    """

    gamma_s: float = 1.9
    gamma_pi: float = 1.9
    theta: float = 0.5
    max_tr_tests: int = 50
    epsilon: float | None = None
    k_max: int = 3000

    def __post_init__(self):
        for name in ("gamma_s", "gamma_pi"):
            value = getattr(self, name)
            if not GAMMA_MIN <= value <= GAMMA_MAX:
                raise ValueError(
                    f"{name} must lie in [{GAMMA_MIN}, {GAMMA_MAX}], got {value}"
                )
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.max_tr_tests < 1:
            raise ValueError(f"max_tr_tests must be >= 1, got {self.max_tr_tests}")
        if self.epsilon is not None and self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max}")

    def resolve_epsilon(self, n):
        return self.epsilon if self.epsilon is not None else 1e-6 * math.sqrt(n)


@dataclass
class Decomposition:
    """Solver output: spike train, kernel, trend and run diagnostics."""

    s_hat: np.ndarray
    pi_hat: np.ndarray
    t_hat: np.ndarray
    iterations: int
    objective_trace: np.ndarray
    tr_tests_per_iter: np.ndarray
    stop_reason: str

    def to_dict(self):
        return {
            "s_hat": self.s_hat.tolist(),
            "pi_hat": self.pi_hat.tolist(),
            "t_hat": self.t_hat.tolist(),
            "iterations": int(self.iterations),
            "objective_trace": self.objective_trace.tolist(),
            "tr_tests_per_iter": self.tr_tests_per_iter.tolist(),
            "stop_reason": self.stop_reason,
        }

    @classmethod
    def from_dict(cls, payload):
        return cls(
            s_hat=np.asarray(payload["s_hat"], dtype=np.float64),
            pi_hat=np.asarray(payload["pi_hat"], dtype=np.float64),
            t_hat=np.asarray(payload["t_hat"], dtype=np.float64),
            iterations=int(payload["iterations"]),
            objective_trace=np.asarray(payload["objective_trace"], dtype=np.float64),
            tr_tests_per_iter=np.asarray(payload["tr_tests_per_iter"], dtype=np.int64),
            stop_reason=str(payload["stop_reason"]),
        )


def objective(signal, kernel, observed, hp, params):
    """Smooth objective value; the indicator terms vanish on feasible points."""
    return fidelity(signal, kernel, observed, hp) + params.lam * spoq_penalty(
        signal, params
    )


def tr_radii(signal_ref, q, theta, n_tests):
    """Trust-region radius schedule in the q-th-power domain.

    Starts at ``sum(|s_n|^q)``, decays geometrically by ``theta`` and
    ends with an exact 0, which every candidate satisfies, so the
    trust-region loop always terminates.
    """
    signal_ref = check_signal(signal_ref, name="signal_ref")
    n_tests = int(n_tests)
    if n_tests < 1:
        raise ValueError(f"n_tests must be >= 1, got {n_tests}")
    radii = np.zeros(n_tests)
    if n_tests == 1:
        return radii
    radii[0] = float(np.sum(np.abs(signal_ref) ** q))
    for i in range(1, n_tests - 1):
        radii[i] = theta * radii[i - 1]
    return radii


def signal_step(signal_ref, kernel_ref, observed, hp, params, config, lip_signal=None):
    """One trust-region validated variable-metric step on the signal.

    Returns the accepted candidate and the number of radius tests used.
    The gradient and the fidelity curvature bound are fixed inside the
    loop; only the lq curvature cap changes with the shrinking radius.
    """
    signal_ref = check_signal(signal_ref, name="signal_ref")
    if lip_signal is None:
        lip_signal = lipschitz_signal(kernel_ref, hp)
    grad = fidelity_grad_signal(
        signal_ref, kernel_ref, observed, hp
    ) + params.lam * spoq_penalty_grad(signal_ref, params)
    radii = tr_radii(signal_ref, params.q, config.theta, config.max_tr_tests)
    for i, radius_pow in enumerate(radii):
        diag = mm_metric_diag(signal_ref, lip_signal, params, radius_pow)
        candidate = project_nonneg(signal_ref - config.gamma_s * grad / diag)
        if in_ball_complement(candidate, params.q, radius_pow):
            return candidate, i + 1
    raise AssertionError("trust-region loop exited without acceptance")


def kernel_step(kernel_ref, signal_new, observed, hp, config, lip_kernel=None):
    """Projected gradient step on the kernel with the scalar metric."""
    kernel_ref = check_kernel(kernel_ref)
    if lip_kernel is None:
        lip_kernel = lipschitz_kernel(signal_new, hp, kernel_ref.size)
    grad = fidelity_grad_kernel(signal_new, kernel_ref, observed, hp)
    return project_simplex(kernel_ref - config.gamma_pi / lip_kernel * grad)


def default_init_signal(n):
    """Constant positive start, per the usual blind deconvolution recipe."""
    return np.ones(int(n))


def default_init_kernel(size):
    """Centered Gaussian taps with a one-sample standard deviation."""
    size = int(size)
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {size}")
    offsets = np.arange(size) - size // 2
    taps = np.exp(-0.5 * offsets.astype(np.float64) ** 2)
    return taps / taps.sum()


def estimate_trend(observed, signal, kernel, hp):
    """Low-pass complement of the peak-free residual."""
    observed = check_signal(observed, name="observed")
    return hp.complement(observed - convolve_same(signal, kernel))


def recenter(signal, kernel):
    """Remove the integer translation ambiguity.

    Shifts the kernel so its largest tap sits at the center and shifts
    the signal the opposite way; the convolution of the pair is
    unchanged except within half a kernel support of the borders.
    """
    signal = check_signal(signal)
    kernel = check_kernel(kernel)
    offset = int(np.argmax(kernel)) - kernel.size // 2
    if offset == 0:
        return signal.copy(), kernel.copy()
    recentered_kernel = shift_kernel(kernel, -offset)
    shifted = np.zeros_like(signal)
    if offset > 0:
        shifted[offset:] = signal[:-offset]
    else:
        shifted[:offset] = signal[-offset:]
    return shifted, recentered_kernel


def solve(observed, init_signal, init_kernel, hp, params, config):
    """Run the alternating solver to a full decomposition.

    Parameters
    ----------
    observed : array-like, shape (N,)
        Measured signal.
    init_signal : array-like, shape (N,)
        Feasible (nonnegative) starting spike train.
    init_kernel : array-like, shape (L,)
        Starting kernel on the unit simplex, L odd.
    hp : HighPassFilter
        Trend/noise separation operator for the same N.
    params : SpoqParams
    config : SolverConfig

    Returns
    -------
    Decomposition
    """
    observed = check_signal(observed, name="observed")
    signal = check_signal(init_signal, name="init_signal").copy()
    kernel = check_kernel(init_kernel, name="init_kernel").copy()
    if np.any(signal < 0):
        raise ValueError("init_signal must be nonnegative")
    if observed.size != signal.size:
        raise ValueError("observed and init_signal lengths differ")
    if hp.n != observed.size:
        raise ValueError("high-pass filter length does not match the signal")
    params.validate()
    epsilon = config.resolve_epsilon(observed.size)

    trace = [objective(signal, kernel, observed, hp, params)]
    tests_used = []
    stop_reason = STOP_ITERATION_CAP
    iterations = 0
    eig_signal = None
    eig_kernel = None
    for _ in range(config.k_max):
        lip_s, eig_signal = lipschitz_signal(
            kernel, hp, start=eig_signal, return_vector=True
        )
        signal_next, n_tests = signal_step(
            signal, kernel, observed, hp, params, config, lip_signal=lip_s
        )
        lip_k, eig_kernel = lipschitz_kernel(
            signal_next, hp, kernel.size, start=eig_kernel, return_vector=True
        )
        kernel = kernel_step(
            kernel, signal_next, observed, hp, config, lip_kernel=lip_k
        )
        step_norm = float(np.linalg.norm(signal - signal_next))
        signal = signal_next
        iterations += 1
        trace.append(objective(signal, kernel, observed, hp, params))
        tests_used.append(n_tests)
        if step_norm <= epsilon:
            stop_reason = STOP_TOLERANCE
            break

    signal, kernel = recenter(signal, kernel)
    trend = estimate_trend(observed, signal, kernel, hp)
    return Decomposition(
        s_hat=signal,
        pi_hat=kernel,
        t_hat=trend,
        iterations=iterations,
        objective_trace=np.asarray(trace),
        tr_tests_per_iter=np.asarray(tests_used, dtype=np.int64),
        stop_reason=stop_reason,
    )
