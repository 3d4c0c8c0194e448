"""Diagonal majorize-minimize metric for the signal block.

On the complement of an lq ball the smooth objective part admits a
quadratic majorant whose curvature matrix is diagonal: a constant floor
(fidelity Lipschitz bound plus the lq-term curvature cap chi) plus a
per-component lp smoothing term.  The trust-region loop in the solver
shrinks the ball radius until the candidate lands inside the majorant's
validity region.

Radius convention: radii are stored and compared in the q-th-power
domain, i.e. membership tests compare ``sum(|s_n|^q)`` against the
stored value directly and the chi formula receives it in its ``rho^q``
slot.  This makes the first trust-region test self-consistent (the
previous iterate passes its own radius).
"""

import numpy as np

from ._validation import check_signal
from .fidelity import fidelity, fidelity_grad_signal
from .penalties import _lp_power, spoq_penalty, spoq_penalty_grad


def chi_constant(q, eta, radius):
    """lq-term curvature cap ``(q - 1) / (eta^q + radius^q)^(2/q)``.

    ``radius`` is in the natural (un-powered) domain.
    """
    if eta <= 0.0:
        raise ValueError(f"eta must be > 0, got {eta}")
    if q < 2.0:
        raise ValueError(f"q must be >= 2, got {q}")
    if radius < 0.0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    return _chi_power(q, eta, float(radius) ** q)


def _chi_power(q, eta, radius_pow):
    """chi with the radius already raised to the q-th power."""
    if radius_pow < 0.0:
        raise ValueError(f"radius_pow must be >= 0, got {radius_pow}")
    return (q - 1.0) / (eta**q + radius_pow) ** (2.0 / q)


def mm_metric_diag(signal_ref, lip_signal, params, radius_pow):
    """Diagonal of the majorant metric at ``signal_ref``.

    ``diag[n] = lip + lam * chi
    + lam / (lp^p + beta^p) * (s_n^2 + alpha^2)^(p/2 - 1)``.

    For p < 2 the last factor grows as s_n -> 0 but is capped at
    alpha^(p-2) by the smoothing, so every entry is finite and positive.

    Parameters
    ----------
    signal_ref : ndarray
        Expansion point s_k.
    lip_signal : float
        Fidelity Lipschitz bound for the current kernel.
    params : SpoqParams
    radius_pow : float
        Trust-region radius in the q-th-power domain.
    """
    params.validate()
    if lip_signal <= 0.0:
        raise ValueError(f"lip_signal must be > 0, got {lip_signal}")
    signal_ref = check_signal(signal_ref, name="signal_ref")
    p = params.p
    lp_pow = _lp_power(signal_ref, p, params.alpha)
    chi = _chi_power(params.q, params.eta, radius_pow)
    curvature = (signal_ref**2 + params.alpha**2) ** (p / 2.0 - 1.0)
    return (
        lip_signal
        + params.lam * chi
        + params.lam / (lp_pow + params.beta**p) * curvature
    )


def majorant_value(signal, signal_ref, kernel_ref, observed, hp, params, diag):
    """Quadratic model of the smooth objective around ``signal_ref``.

    ``f(s_k) + (s - s_k)^T grad f(s_k) + 0.5 ||s - s_k||^2_diag`` with
    ``f = fidelity + lam * penalty``.  Dominates the true objective for
    feasible points outside the lq ball matching ``diag``; exposed for
    property testing.
    """
    signal = check_signal(signal)
    signal_ref = check_signal(signal_ref, name="signal_ref")
    if signal.size != signal_ref.size:
        raise ValueError("signal and signal_ref lengths differ")
    value_ref = fidelity(signal_ref, kernel_ref, observed, hp) + params.lam * spoq_penalty(
        signal_ref, params
    )
    grad_ref = fidelity_grad_signal(
        signal_ref, kernel_ref, observed, hp
    ) + params.lam * spoq_penalty_grad(signal_ref, params)
    step = signal - signal_ref
    return value_ref + float(np.dot(grad_ref, step)) + 0.5 * float(
        np.dot(diag * step, step)
    )


def in_ball_complement(signal, q, radius_pow):
    """True iff ``sum(|s_n|^q) >= radius_pow`` (power-domain threshold)."""
    if q < 2.0:
        raise ValueError(f"q must be >= 2, got {q}")
    if radius_pow < 0.0:
        raise ValueError(f"radius_pow must be >= 0, got {radius_pow}")
    signal = check_signal(signal)
    return bool(np.sum(np.abs(signal) ** q) >= radius_pow)
