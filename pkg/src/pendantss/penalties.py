"""Smoothed lp/lq norm-ratio sparsity penalty (SOOT/SPOQ family).

The penalty is ``log((lp_a^p + beta^p)^(1/p) / lq_e)`` built from two
smoothed norms,

    lp_a(s) = ( sum_n ((s_n^2 + alpha^2)^(p/2) - alpha^p) )^(1/p)
    lq_e(s) = ( eta^q + sum_n |s_n|^q )^(1/q),

which promotes sparse spike trains while staying differentiable and
approximately scale invariant.  ``(p, q) = (1, 2)`` is the SOOT
(smoothed l1/l2) special case.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_signal


@dataclass(frozen=True)
class SpoqParams:
    """Penalty configuration.

    ``lam`` is the weight multiplying the penalty in the objective.
    Smoothing parameters must be positive; differentiability of the
    ratio requires ``q > 2`` or, for ``q = 2``,
    ``eta^2 * alpha^(p-2) > beta^p``.
    """

    p: float = 1.0
    q: float = 2.0
    alpha: float = 7e-7
    beta: float = 1e-8
    eta: float = 5e-3
    lam: float = 1.0

    def violation(self):
        """Return a description of the first violated constraint, or None."""
        if not 0.0 < self.p < 2.0:
            return f"p must lie in (0, 2), got {self.p}"
        if self.q < 2.0:
            return f"q must be >= 2, got {self.q}"
        if self.alpha <= 0.0:
            return f"alpha must be > 0, got {self.alpha}"
        if self.beta <= 0.0:
            return f"beta must be > 0, got {self.beta}"
        if self.eta <= 0.0:
            return f"eta must be > 0, got {self.eta}"
        if self.lam <= 0.0:
            return f"lam must be > 0, got {self.lam}"
        if self.q == 2.0:
            lhs = self.eta**2 * self.alpha ** (self.p - 2.0)
            rhs = self.beta**self.p
            if lhs <= rhs:
                return (
                    "smoothness condition failed for q = 2: requires "
                    f"eta^2 * alpha^(p-2) > beta^p ({lhs!r} <= {rhs!r})"
                )
        return None

    def validate(self):
        """Raise ValueError if any constraint is violated; return self."""
        message = self.violation()
        if message is not None:
            raise ValueError(message)
        return self


def _lp_power(signal, p, alpha):
    """sum_n ((s_n^2 + alpha^2)^(p/2) - alpha^p), the p-th power of lp_a.

    Each term is >= 0 exactly; the clamp only absorbs the one-ulp
    cancellation of ``(alpha^2)^(p/2) - alpha^p`` at zero entries.
    """
    total = float(np.sum((signal**2 + alpha**2) ** (p / 2.0) - alpha**p))
    return max(total, 0.0)


def _lq_power(signal, q, eta):
    """eta^q + sum_n |s_n|^q, the q-th power of lq_e."""
    return float(eta**q + np.sum(np.abs(signal) ** q))


def lp_smooth(signal, p, alpha):
    """Smoothed lp quasi-norm; zero iff the signal is zero."""
    if alpha <= 0.0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if not 0.0 < p < 2.0:
        raise ValueError(f"p must lie in (0, 2), got {p}")
    signal = check_signal(signal)
    return _lp_power(signal, p, alpha) ** (1.0 / p)


def lq_smooth(signal, q, eta):
    """Smoothed lq norm; bounded below by eta."""
    if eta <= 0.0:
        raise ValueError(f"eta must be > 0, got {eta}")
    if q < 2.0:
        raise ValueError(f"q must be >= 2, got {q}")
    signal = check_signal(signal)
    return _lq_power(signal, q, eta) ** (1.0 / q)


def spoq_penalty(signal, params):
    """Log-ratio penalty value ``log((lp^p + beta^p)^(1/p) / lq)``."""
    params.validate()
    signal = check_signal(signal)
    lp_pow = _lp_power(signal, params.p, params.alpha)
    lq_pow = _lq_power(signal, params.q, params.eta)
    return float(
        np.log(lp_pow + params.beta**params.p) / params.p
        - np.log(lq_pow) / params.q
    )


def spoq_penalty_grad(signal, params):
    """Gradient of :func:`spoq_penalty`.

    Component n is
    ``s_n (s_n^2 + alpha^2)^(p/2 - 1) / (lp^p + beta^p)
    - sign(s_n) |s_n|^(q-1) / (eta^q + sum |s|^q)``;
    exactly zero at the origin (the penalty has a local minimizer there).
    """
    params.validate()
    signal = check_signal(signal)
    p, q = params.p, params.q
    lp_pow = _lp_power(signal, p, params.alpha)
    lq_pow = _lq_power(signal, q, params.eta)
    numer = signal * (signal**2 + params.alpha**2) ** (p / 2.0 - 1.0)
    # sign(0) = 0 and |0|^(q-1) = 0 keep the lq term smooth at zeros.
    lq_term = np.sign(signal) * np.abs(signal) ** (q - 1.0)
    return numer / (lp_pow + params.beta**p) - lq_term / lq_pow
