"""Euclidean projections onto the nonnegative orthant and the unit simplex."""

import numpy as np


def project_nonneg(values):
    """Componentwise ``max(v, 0)``.

    Also the projection in any diagonal positive metric: the constraint
    is separable, so the metric weights cancel coordinate by coordinate.
    """
    return np.maximum(np.asarray(values, dtype=np.float64), 0.0)


def project_simplex(values):
    """Euclidean projection onto ``{x >= 0, sum(x) = 1}``.

    Sort-based threshold construction, O(L log L); coordinates landing
    exactly on the threshold map to zero.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValueError("expected a nonempty 1-D vector")
    dropped = np.sort(values)[::-1]
    cumulative = np.cumsum(dropped)
    counts = np.arange(1, values.size + 1)
    # Largest prefix whose running threshold keeps its smallest entry positive;
    # nonempty because the first prefix always qualifies.
    positive = dropped - (cumulative - 1.0) / counts > 0.0
    last = np.nonzero(positive)[0][-1]
    threshold = (cumulative[last] - 1.0) / (last + 1.0)
    return np.maximum(values - threshold, 0.0)
