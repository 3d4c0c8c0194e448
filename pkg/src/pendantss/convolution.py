"""Centered zero-padded convolution and its adjoints.

The observation model is ``y = s * pi + t + n`` with a short peak-shape
kernel ``pi``.  All operators here use the same boundary convention:
linear convolution with zero padding, cropped to the signal length so
that the kernel's center tap (index ``L // 2``, L odd) stays aligned
with the sample it multiplies.  With that convention a spike at index n
convolved with a centered kernel produces a peak at index n, and any
residual spatial ambiguity of blind deconvolution is a pure integer
translation.
"""

import numpy as np

from ._validation import check_kernel, check_lengths, check_signal


def _check_taps(taps, name="kernel"):
    """Tap vectors for convolution: finite, 1-D, odd length (centered)."""
    arr = check_signal(taps, name=name)
    if arr.size % 2 == 0:
        raise ValueError(f"{name} length must be odd, got {arr.size}")
    return arr


def convolve_same(signal, kernel):
    """Convolve ``signal`` with ``kernel``, cropped to the signal length.

    ``out[n] = sum_l kernel[l] * signal[n - l + L // 2]`` with
    out-of-range samples treated as zero.

    Parameters
    ----------
    signal : array-like, shape (N,)
    kernel : array-like, shape (L,), L odd, L <= N

    Returns
    -------
    numpy.ndarray, shape (N,)
    """
    signal = check_signal(signal)
    kernel = _check_taps(kernel)
    check_lengths(signal, kernel)
    # np.convolve 'same' crops the full linear convolution starting at
    # (L - 1) // 2, which equals L // 2 for odd L: exactly our alignment.
    return np.convolve(signal, kernel, mode="same")


def adjoint_convolve_signal(residual, kernel):
    """Adjoint of ``s -> convolve_same(s, kernel)`` applied to ``residual``.

    Correlation with the kernel under the same centered zero-padding
    convention; for odd L it equals convolution with the reversed taps.
    """
    residual = check_signal(residual, name="residual")
    kernel = _check_taps(kernel)
    check_lengths(residual, kernel)
    return np.convolve(residual, kernel[::-1], mode="same")


def adjoint_convolve_kernel(residual, signal, size):
    """Adjoint of ``k -> convolve_same(signal, k)`` applied to ``residual``.

    Parameters
    ----------
    residual : array-like, shape (N,)
    signal : array-like, shape (N,)
    size : int
        Kernel length L (odd, <= N).

    Returns
    -------
    numpy.ndarray, shape (L,)
        ``out[l] = sum_n residual[n] * signal[n - l + L // 2]``.
    """
    residual = check_signal(residual, name="residual")
    signal = check_signal(signal)
    size = int(size)
    if size % 2 == 0 or size < 1:
        raise ValueError(f"kernel length must be odd and positive, got {size}")
    if size > signal.size:
        raise ValueError(
            f"kernel length {size} exceeds signal length {signal.size}"
        )
    n = signal.size
    center = size // 2
    # Full cross-correlation corr[j] = sum_n residual[n + j] * signal[n],
    # laid out for j = -(N-1) .. (N-1); we need j = l - center.
    corr = np.correlate(residual, signal, mode="full")
    return corr[n - 1 - center : n - 1 - center + size].copy()


def shift_kernel(kernel, offset):
    """Translate kernel taps by ``offset`` samples and renormalize.

    Vacated positions are zero-filled.  Raises if the shift pushes all
    mass outside the support (remaining sum below 1e-14).
    """
    kernel = check_kernel(kernel)
    offset = int(offset)
    size = kernel.size
    if abs(offset) >= size:
        raise ValueError(f"shift {offset} out of range for kernel length {size}")
    shifted = np.zeros_like(kernel)
    if offset >= 0:
        shifted[offset:] = kernel[: size - offset]
    else:
        shifted[:offset] = kernel[-offset:]
    total = shifted.sum()
    if total < 1e-14:
        raise ValueError(f"shift {offset} leaves no kernel mass to renormalize")
    return shifted / total
