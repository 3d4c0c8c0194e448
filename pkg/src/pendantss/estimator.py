"""sklearn-style estimator wrapping the alternating solver.

``Pendantss.fit(x)`` decomposes one observed signal into a nonnegative
spike train, a unit-simplex peak kernel and a slowly varying trend.
Hyperparameters live in ``__init__`` so the estimator composes with
``get_params`` / ``set_params`` / ``clone`` and friends.
"""

from sklearn.base import BaseEstimator

from ._validation import check_kernel, check_signal
from .convolution import convolve_same
from .fidelity import HighPassFilter
from .penalties import SpoqParams
from .solver import SolverConfig, default_init_kernel, default_init_signal, solve


class Pendantss(BaseEstimator):
    """Joint detrending and sparse blind deconvolution of a 1-D signal.

    Parameters
    ----------
    p, q : float
        Norm-ratio exponents; (1, 2) is the smoothed l1/l2 (SOOT) mode.
    alpha, beta, eta : float
        Smoothing parameters of the penalty.
    lam : float
        Penalty weight.
    cutoff : int
        High-pass cutoff bin separating trend from noise.
    kernel_size : int
        Odd kernel support length.
    gamma_s, gamma_pi : float
        Step sizes in (0, 2) for the two blocks.
    theta : float
        Trust-region radius decay in (0, 1).
    max_tr_tests : int
        Radius tests per signal update.
    epsilon : float or None
        Stopping tolerance on the signal step; None means
        ``1e-6 * sqrt(N)``.
    max_iter : int
        Outer iteration cap.
    init_signal, init_kernel : array-like or None
        Optional starting points; defaults are a constant positive
        signal and a one-sample-wide Gaussian kernel.

    Attributes
    ----------
    spikes_ : ndarray, shape (N,)
        Estimated spike train (nonnegative).
    kernel_ : ndarray, shape (kernel_size,)
        Estimated peak shape on the unit simplex, recentered.
    trend_ : ndarray, shape (N,)
        Estimated baseline.
    n_iter_ : int
    objective_trace_ : ndarray
    tr_tests_per_iter_ : ndarray
    stop_reason_ : str
    decomposition_ : Decomposition
    """

    def __init__(
        self,
        p=1.0,
        q=2.0,
        alpha=7e-7,
        beta=1e-8,
        eta=5e-3,
        lam=1.0,
        cutoff=4,
        kernel_size=21,
        gamma_s=1.9,
        gamma_pi=1.9,
        theta=0.5,
        max_tr_tests=50,
        epsilon=None,
        max_iter=3000,
        init_signal=None,
        init_kernel=None,
    ):
        self.p = p
        self.q = q
        self.alpha = alpha
        self.beta = beta
        self.eta = eta
        self.lam = lam
        self.cutoff = cutoff
        self.kernel_size = kernel_size
        self.gamma_s = gamma_s
        self.gamma_pi = gamma_pi
        self.theta = theta
        self.max_tr_tests = max_tr_tests
        self.epsilon = epsilon
        self.max_iter = max_iter
        self.init_signal = init_signal
        self.init_kernel = init_kernel

    def _spoq_params(self):
        return SpoqParams(
            p=self.p,
            q=self.q,
            alpha=self.alpha,
            beta=self.beta,
            eta=self.eta,
            lam=self.lam,
        ).validate()

    def _solver_config(self):
        return SolverConfig(
            gamma_s=self.gamma_s,
            gamma_pi=self.gamma_pi,
            theta=self.theta,
            max_tr_tests=self.max_tr_tests,
            epsilon=self.epsilon,
            k_max=self.max_iter,
        )

    def fit(self, X, y=None):
        """Decompose the observed signal ``X`` of shape (N,).

        ``y`` is ignored; it exists for API compatibility.
        """
        observed = check_signal(X, name="X")
        init_signal = (
            default_init_signal(observed.size)
            if self.init_signal is None
            else check_signal(self.init_signal, name="init_signal")
        )
        init_kernel = (
            default_init_kernel(self.kernel_size)
            if self.init_kernel is None
            else check_kernel(self.init_kernel, name="init_kernel")
        )
        hp = HighPassFilter(observed.size, self.cutoff)
        decomposition = solve(
            observed,
            init_signal,
            init_kernel,
            hp,
            self._spoq_params(),
            self._solver_config(),
        )
        self.decomposition_ = decomposition
        self.spikes_ = decomposition.s_hat
        self.kernel_ = decomposition.pi_hat
        self.trend_ = decomposition.t_hat
        self.n_iter_ = decomposition.iterations
        self.objective_trace_ = decomposition.objective_trace
        self.tr_tests_per_iter_ = decomposition.tr_tests_per_iter
        self.stop_reason_ = decomposition.stop_reason
        return self

    def reconstruct(self):
        """Denoised model of the observation, ``spikes * kernel + trend``."""
        if not hasattr(self, "spikes_"):
            raise AttributeError("call fit before reconstruct")
        return convolve_same(self.spikes_, self.kernel_) + self.trend_
