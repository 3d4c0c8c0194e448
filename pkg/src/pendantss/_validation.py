"""Input validation helpers shared by the functional core and the estimator."""

import numpy as np

KERNEL_SUM_TOL = 1e-12


def check_signal(values, name="signal"):
    """Coerce ``values`` to a finite 1-D float64 array of length >= 1.

    Parameters
    ----------
    values : array-like, shape (N,)
        Sample vector.
    name : str, optional
        Label used in error messages.

    Returns
    -------
    numpy.ndarray
        Float64 view or copy of the input.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError(f"{name} must have at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_kernel(taps, name="kernel"):
    """Validate a peak-shape kernel: odd length, nonnegative, unit sum.

    The unit-sum requirement is checked to within ``KERNEL_SUM_TOL``.
    """
    arr = check_signal(taps, name=name)
    if arr.size % 2 == 0:
        raise ValueError(f"{name} length must be odd, got {arr.size}")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > KERNEL_SUM_TOL:
        raise ValueError(f"{name} taps must sum to 1 (got {total!r})")
    return arr


def check_lengths(signal, kernel):
    """Require kernel support no longer than the signal."""
    if kernel.size > signal.size:
        raise ValueError(
            f"kernel length {kernel.size} exceeds signal length {signal.size}"
        )
