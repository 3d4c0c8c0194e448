"""Signal-to-noise scoring of recovered components.

All values are ``20 log10(||ref|| / ||ref - est||)`` in dB, clipped at
a 300 dB cap so exact recoveries stay finite and sortable.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_signal
from .convolution import shift_kernel

SNR_CAP_DB = 300.0


def snr(reference, estimate):
    """Reference-to-error norm ratio in dB, capped at 300."""
    reference = check_signal(reference, name="reference")
    estimate = check_signal(estimate, name="estimate")
    if reference.size != estimate.size:
        raise ValueError("reference and estimate lengths differ")
    ref_norm = float(np.linalg.norm(reference))
    if ref_norm == 0.0:
        raise ValueError("reference must not be identically zero")
    err_norm = float(np.linalg.norm(reference - estimate))
    if err_norm == 0.0:
        return SNR_CAP_DB
    return min(20.0 * np.log10(ref_norm / err_norm), SNR_CAP_DB)


def tsnr(reference, estimate, support):
    """SNR restricted to the given support indices (truncated SNR)."""
    support = np.asarray(support, dtype=np.int64)
    if support.size == 0:
        raise ValueError("support must not be empty")
    reference = check_signal(reference, name="reference")
    estimate = check_signal(estimate, name="estimate")
    if np.any(support < 0) or np.any(support >= reference.size):
        raise ValueError("support index out of range")
    return snr(reference[support], estimate[support])


def kernel_snr_aligned(reference, estimate, max_shift):
    """Best kernel SNR over integer shifts of the estimate.

    Scans shifts in ``[-max_shift, max_shift]`` and returns the best
    (SNR, shift) pair.  Ties prefer the smallest |shift|, then the
    negative one.  Shifts that push all kernel mass off the support are
    skipped.
    """
    reference = check_signal(reference, name="reference")
    estimate = check_signal(estimate, name="estimate")
    max_shift = int(max_shift)
    if not 0 <= max_shift < reference.size:
        raise ValueError(f"max_shift must lie in [0, L), got {max_shift}")
    best_value = -np.inf
    best_shift = 0
    for magnitude in range(max_shift + 1):
        shifts = (0,) if magnitude == 0 else (-magnitude, magnitude)
        for shift in shifts:
            try:
                candidate = shift_kernel(estimate, shift)
            except ValueError:
                continue
            value = snr(reference, candidate)
            if value > best_value:
                best_value = value
                best_shift = shift
    if best_value == -np.inf:
        raise ValueError("no admissible shift kept any kernel mass")
    return best_value, best_shift


def composite_score(snr_s, snr_pi, snr_t):
    """Single-realization tuning criterion ``2*snr_s + snr_pi + snr_t``."""
    for value in (snr_s, snr_pi, snr_t):
        if not np.isfinite(value):
            raise ValueError(f"composite inputs must be finite, got {value}")
    return 2.0 * snr_s + snr_pi + snr_t


@dataclass(frozen=True)
class MetricsReport:
    """The four component SNRs plus the composite criterion."""

    snr_s: float
    tsnr_s: float
    snr_t: float
    snr_pi: float
    composite: float

    @classmethod
    def build(cls, snr_s, tsnr_s, snr_t, snr_pi):
        return cls(
            snr_s=snr_s,
            tsnr_s=tsnr_s,
            snr_t=snr_t,
            snr_pi=snr_pi,
            composite=composite_score(snr_s, snr_pi, snr_t),
        )

    def to_dict(self):
        return {
            "snr_s": self.snr_s,
            "tsnr_s": self.tsnr_s,
            "snr_t": self.snr_t,
            "snr_pi": self.snr_pi,
            "composite": self.composite,
        }
