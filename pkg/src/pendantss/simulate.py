"""Seeded generators for synthetic spike-train benchmarks.

Randomness comes from ``numpy.random.default_rng`` (PCG64; normal
variates via numpy's ziggurat), so every artifact is reproducible from
an integer seed.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_kernel, check_signal
from .convolution import convolve_same

DATASET_SPIKES = {"C": 10, "D": 20}


def gaussian_kernel(size, width=0.15):
    """Normalized Gaussian peak on ``size`` taps.

    The taps sample the interval [-1, 1] uniformly (spacing
    ``2 / (size - 1)``), so ``width`` is expressed on that axis; the
    default 0.15 gives a sharp peak spanning a few taps of a 21-tap
    support.
    """
    size = int(size)
    if size < 3 or size % 2 == 0:
        raise ValueError(f"size must be odd and >= 3, got {size}")
    if width <= 0.0:
        raise ValueError(f"width must be > 0, got {width}")
    spacing = 2.0 / (size - 1)
    offsets = (np.arange(size) - size // 2) * spacing
    taps = np.exp(-(offsets**2) / (2.0 * width**2))
    return taps / taps.sum()


def spike_train(n, n_spikes, min_gap, amp_low, amp_high, seed):
    """Sparse nonnegative spike train with a minimum inter-spike gap.

    Positions are uniform over all placements with pairwise gaps
    >= ``min_gap`` (gap-transform sampling, no rejection); amplitudes
    are uniform in [amp_low, amp_high].  Off-support entries are exactly
    zero.

    Returns
    -------
    (numpy.ndarray, numpy.ndarray)
        The signal and the sorted support indices.
    """
    n = int(n)
    n_spikes = int(n_spikes)
    min_gap = int(min_gap)
    if n_spikes < 0 or min_gap < 0:
        raise ValueError("n_spikes and min_gap must be nonnegative")
    if amp_high < amp_low:
        raise ValueError("amp_high must be >= amp_low")
    signal = np.zeros(n)
    if n_spikes == 0:
        return signal, np.empty(0, dtype=np.int64)
    if n_spikes * (min_gap + 1) > n:
        raise ValueError(
            f"cannot place {n_spikes} spikes with gap {min_gap} in length {n}"
        )
    rng = np.random.default_rng(seed)
    # Remove the mandatory gaps, draw distinct slots, then re-expand.
    compressed = n - (n_spikes - 1) * min_gap
    slots = np.sort(rng.choice(compressed, size=n_spikes, replace=False))
    positions = slots + np.arange(n_spikes) * min_gap
    amplitudes = rng.uniform(amp_low, amp_high, size=n_spikes)
    signal[positions] = amplitudes
    return signal, positions.astype(np.int64)


def lowfreq_trend(n, amplitude, max_bin, seed):
    """Slowly varying baseline: an offset plus 2-3 integer-bin sinusoids.

    All spectral content sits at DFT bins <= ``max_bin``, which is the
    separation hypothesis the high-pass fidelity relies on.  The result
    is rescaled so its largest magnitude equals ``amplitude``.
    """
    n = int(n)
    max_bin = int(max_bin)
    if max_bin < 1:
        raise ValueError(f"max_bin must be >= 1, got {max_bin}")
    if amplitude < 0.0:
        raise ValueError(f"amplitude must be >= 0, got {amplitude}")
    if amplitude == 0.0:
        return np.zeros(n)
    rng = np.random.default_rng(seed)
    samples = np.arange(n)
    trend = np.full(n, rng.uniform(0.5, 1.0))
    for _ in range(int(rng.integers(2, 4))):
        frequency_bin = int(rng.integers(1, max_bin + 1))
        phase = rng.uniform(0.0, 2.0 * np.pi)
        weight = rng.uniform(0.3, 1.0)
        trend += weight * np.cos(2.0 * np.pi * frequency_bin * samples / n + phase)
    return trend * (amplitude / np.max(np.abs(trend)))


@dataclass
class GroundTruth:
    """One synthetic realization and everything needed to score it."""

    s_true: np.ndarray
    pi_true: np.ndarray
    t_true: np.ndarray
    sigma: float
    y: np.ndarray
    seed: int

    @property
    def support(self):
        """Indices where the true spike train is nonzero (exact zeros off it)."""
        return np.flatnonzero(self.s_true != 0.0)


def make_observation(s_true, pi_true, t_true, noise_percent, seed):
    """Assemble ``y = s * pi + t + n`` with white Gaussian noise.

    The noise standard deviation is ``noise_percent / 100`` times the
    maximum of the noiseless peak signal.
    """
    s_true = check_signal(s_true, name="s_true")
    pi_true = check_kernel(pi_true, name="pi_true")
    t_true = check_signal(t_true, name="t_true")
    if t_true.size != s_true.size:
        raise ValueError("s_true and t_true lengths differ")
    if noise_percent < 0.0:
        raise ValueError(f"noise_percent must be >= 0, got {noise_percent}")
    peaks = convolve_same(s_true, pi_true)
    sigma = noise_percent / 100.0 * float(np.max(peaks))
    rng = np.random.default_rng(seed)
    noise = sigma * rng.standard_normal(s_true.size) if sigma > 0.0 else 0.0
    return GroundTruth(
        s_true=s_true,
        pi_true=pi_true,
        t_true=t_true,
        sigma=sigma,
        y=peaks + t_true + noise,
        seed=int(seed) if np.isscalar(seed) else -1,
    )


def make_dataset(
    dataset_style,
    noise_percent,
    seed,
    n=200,
    kernel_size=21,
    kernel_width=0.15,
    min_gap=4,
    amp_low=1.0,
    amp_high=10.0,
    trend_amplitude=5.0,
    trend_max_bin=3,
):
    """Benchmark realization in the C (10 spikes) or D (20 spikes) style."""
    if dataset_style not in DATASET_SPIKES:
        raise ValueError(
            f"dataset_style must be one of {sorted(DATASET_SPIKES)}, got {dataset_style!r}"
        )
    seed = int(seed)
    rng = np.random.default_rng(seed)
    s_true, _ = spike_train(
        n, DATASET_SPIKES[dataset_style], min_gap, amp_low, amp_high, rng
    )
    t_true = lowfreq_trend(n, trend_amplitude, trend_max_bin, rng)
    truth = make_observation(
        s_true, gaussian_kernel(kernel_size, kernel_width), t_true, noise_percent, rng
    )
    truth.seed = seed
    return truth
