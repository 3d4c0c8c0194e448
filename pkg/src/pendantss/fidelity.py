"""High-pass filtered quadratic data fidelity and its block Lipschitz bounds.

The trend/noise separation hypothesis: slow baselines live below a
cutoff frequency, so the fit is scored only on the high-pass part of the
residual, ``0.5 * ||H(y - pi * s)||^2``.  H is realized as an ideal
zero-phase DFT-domain projector (self-adjoint, idempotent), which keeps
the gradients simple and makes the low-pass complement an exact
partition of the identity.  The class hides the realization behind
``apply``/``complement`` so a recursive-filter variant can be swapped in
later without touching the solver.
"""

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ._validation import check_kernel, check_signal
from .convolution import adjoint_convolve_kernel, adjoint_convolve_signal, convolve_same

LIPSCHITZ_FLOOR = 1e-12
LIPSCHITZ_SAFETY = 1.01


class LipschitzEstimationError(RuntimeError):
    """Eigenvalue iteration failed to converge; carries the last iterate."""

    def __init__(self, message, last_value, last_vector):
        super().__init__(message)
        self.last_value = last_value
        self.last_vector = last_vector


class HighPassFilter:
    """Ideal DFT-domain high-pass projector.

    Zeroes every DFT bin k with ``min(k, N - k) < cutoff`` and keeps the
    rest, so DC and the lowest ``cutoff - 1`` harmonic pairs are removed.

    Parameters
    ----------
    n : int
        Signal length N.
    cutoff : int
        Cutoff bin f_c, ``1 <= cutoff <= N // 2``.
    """

    def __init__(self, n, cutoff):
        n = int(n)
        cutoff = int(cutoff)
        if n < 2:
            raise ValueError(f"signal length must be >= 2, got {n}")
        if not 1 <= cutoff <= n // 2:
            raise ValueError(
                f"cutoff must lie in [1, {n // 2}] for length {n}, got {cutoff}"
            )
        self.n = n
        self.cutoff = cutoff

    def __repr__(self):
        return f"HighPassFilter(n={self.n}, cutoff={self.cutoff})"

    def _check(self, values):
        arr = check_signal(values)
        if arr.size != self.n:
            raise ValueError(f"expected length {self.n}, got {arr.size}")
        return arr

    def apply(self, values):
        """High-pass part of ``values`` (exactly real output)."""
        arr = self._check(values)
        spectrum = np.fft.rfft(arr)
        spectrum[: self.cutoff] = 0.0
        return np.fft.irfft(spectrum, n=self.n)

    def complement(self, values):
        """Low-pass part, ``values - apply(values)``; keeps DC and trend."""
        arr = self._check(values)
        return arr - self.apply(arr)


def fidelity(signal, kernel, observed, hp):
    """Half squared norm of the high-pass filtered residual."""
    residual = check_signal(observed, name="observed") - convolve_same(signal, kernel)
    filtered = hp.apply(residual)
    return 0.5 * float(np.dot(filtered, filtered))


def fidelity_grad_signal(signal, kernel, observed, hp):
    """Gradient of :func:`fidelity` in the signal block.

    Uses the projector identity ``H^T H = H``.
    """
    residual = check_signal(observed, name="observed") - convolve_same(signal, kernel)
    return -adjoint_convolve_signal(hp.apply(residual), kernel)


def fidelity_grad_kernel(signal, kernel, observed, hp):
    """Gradient of :func:`fidelity` in the kernel block."""
    kernel = check_signal(kernel, name="kernel")
    residual = check_signal(observed, name="observed") - convolve_same(signal, kernel)
    return -adjoint_convolve_kernel(hp.apply(residual), signal, kernel.size)


def largest_eigenvalue(matvec, size, tol=1e-6, max_iter=500, start=None):
    """Largest eigenvalue of a symmetric PSD operator via Lanczos iteration.

    Benchmark instances put the two leading eigenvalues of the kernel
    block within a fraction of a percent of each other, where plain
    power iteration needs thousands of steps to stagnate; Lanczos
    (ARPACK) reaches the same matvec-oracle answer in a few dozen.

    Parameters
    ----------
    matvec : callable
        Applies the operator to a vector of length ``size``.
    size : int
        Operator dimension.
    tol : float, optional
        Relative eigenvalue tolerance.
    max_iter : int, optional
        Iteration cap; exceeding it raises LipschitzEstimationError.
    start : ndarray, optional
        Warm-start vector.  Defaults to all-ones plus a tiny
        deterministic perturbation, which avoids a start orthogonal to
        the leading eigenvector while keeping runs bit-reproducible.

    Returns
    -------
    (float, numpy.ndarray)
        Eigenvalue estimate and unit-norm eigenvector.
    """
    if start is None:
        vec = 1.0 + 1e-6 * np.sin(np.arange(size))
    else:
        vec = np.asarray(start, dtype=np.float64).copy()
    norm = np.linalg.norm(vec)
    if norm == 0.0 or not np.all(np.isfinite(vec)):
        vec = np.ones(size)
        norm = np.linalg.norm(vec)
    vec /= norm
    if size == 1:
        return float(matvec(np.ones(1))[0]), np.ones(1)
    operator = LinearOperator((size, size), matvec=matvec, dtype=np.float64)
    try:
        values, vectors = eigsh(
            operator, k=1, which="LA", v0=vec, tol=tol, maxiter=max_iter
        )
    except ArpackNoConvergence as exc:
        last_value = float(exc.eigenvalues[-1]) if len(exc.eigenvalues) else None
        last_vector = exc.eigenvectors[:, -1] if exc.eigenvectors.size else vec
        raise LipschitzEstimationError(
            f"eigenvalue iteration did not converge in {max_iter} iterations",
            last_value=last_value,
            last_vector=last_vector,
        ) from exc
    return float(values[0]), vectors[:, 0]


def lipschitz_signal(kernel, hp, start=None, return_vector=False, tol=1e-6, max_iter=500):
    """Upper bound on the Lipschitz constant of the signal-block gradient.

    Largest eigenvalue of ``(H Pi)^T (H Pi)`` from the matvec oracle,
    inflated by a 1.01 safety factor so the bound stays valid under the
    iteration tolerance.
    """
    kernel = check_kernel(kernel)

    def matvec(vec):
        return adjoint_convolve_signal(hp.apply(convolve_same(vec, kernel)), kernel)

    value, vec = largest_eigenvalue(matvec, hp.n, tol=tol, max_iter=max_iter, start=start)
    bound = max(LIPSCHITZ_SAFETY * value, LIPSCHITZ_FLOOR)
    return (bound, vec) if return_vector else bound


def lipschitz_kernel(signal, hp, size, start=None, return_vector=False, tol=1e-6, max_iter=500):
    """Same bound for the kernel block, ``k -> H (signal * k)``.

    A zero signal makes the operator null; the 1e-12 floor keeps the
    downstream step size finite.
    """
    signal = check_signal(signal)
    size = int(size)
    if not np.any(signal):
        return (LIPSCHITZ_FLOOR, None) if return_vector else LIPSCHITZ_FLOOR

    def matvec(vec):
        return adjoint_convolve_kernel(
            hp.apply(convolve_same(signal, vec)), signal, size
        )

    value, vec = largest_eigenvalue(matvec, size, tol=tol, max_iter=max_iter, start=start)
    bound = max(LIPSCHITZ_SAFETY * value, LIPSCHITZ_FLOOR)
    return (bound, vec) if return_vector else bound
