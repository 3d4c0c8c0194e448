import numpy as np
import pytest

from pendantss.penalties import (
    SpoqParams,
    lp_smooth,
    lq_smooth,
    spoq_penalty,
    spoq_penalty_grad,
)

SOOT = SpoqParams(p=1.0, q=2.0, alpha=7e-7, beta=1e-9, eta=1e-3, lam=1.0)
SPOQ_075_10 = SpoqParams(p=0.75, q=10.0, alpha=7e-7, beta=1e-9, eta=1e-3, lam=1.0)


def grad_fd(fun, point):
    """Central finite differences with a per-component relative step."""
    out = np.zeros_like(point)
    for i in range(point.size):
        step = 1e-6 * (1.0 + abs(point[i]))
        hi = point.copy()
        lo = point.copy()
        hi[i] += step
        lo[i] -= step
        out[i] = (fun(hi) - fun(lo)) / (2.0 * step)
    return out


class TestLpSmooth:
    def test_zero_signal(self):
        assert lp_smooth(np.zeros(8), 0.75, 7e-7) == 0.0

    def test_p2_closed_form(self):
        # ((9 + 1)^1 - 1)^(1/2) = 3 in the p -> 2 limit formula
        val = lp_smooth(np.array([3.0]), 1.9999999999, 1.0)
        assert abs(val - 3.0) < 1e-6

    def test_matches_extended_precision_oracle(self):
        # frozen from a numpy.longdouble direct summation
        val = lp_smooth(np.array([1.0, -2.0, 0.5]), 0.75, 7e-7)
        assert abs(val - 4.866115577358923) < 1e-10 * 4.866115577358923

    def test_zero_iff_zero(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            s = rng.normal(size=6)
            assert lp_smooth(s, 1.0, 7e-7) > 0.0
        assert lp_smooth(np.zeros(6), 1.0, 7e-7) == 0.0

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            lp_smooth(np.ones(3), 1.0, 0.0)
        with pytest.raises(ValueError):
            lp_smooth(np.ones(3), 2.5, 1e-6)


class TestLqSmooth:
    def test_zero_signal_floor(self):
        assert lq_smooth(np.zeros(5), 2.0, 1e-3) == pytest.approx(1e-3)

    def test_euclidean_limit(self):
        eta = 1e-6
        val = lq_smooth(np.array([3.0, 4.0]), 2.0, eta)
        assert val == pytest.approx(np.sqrt(eta**2 + 25.0))
        assert abs(val - 5.0) < 1e-9

    def test_matches_direct_sum_oracle(self):
        # frozen from a numpy.longdouble direct summation, q = 10
        rng = np.random.default_rng(42)
        s = rng.normal(size=12)
        val = lq_smooth(s, 10.0, 1e-3)
        assert abs(val - 1.955064418460672) < 1e-12 * 1.955064418460672

    def test_lower_bound_eta(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            s = rng.normal(size=7) * rng.uniform(0, 10)
            assert lq_smooth(s, 2.0, 1e-3) >= 1e-3

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            lq_smooth(np.ones(3), 2.0, 0.0)
        with pytest.raises(ValueError):
            lq_smooth(np.ones(3), 1.5, 1e-3)


class TestPenaltyValue:
    def test_zero_signal(self):
        prm = SOOT
        expected = np.log(prm.beta / prm.eta)
        assert spoq_penalty(np.zeros(10), prm) == pytest.approx(expected, rel=1e-12)

    def test_zero_signal_matched_floors(self):
        prm = SpoqParams(p=1.0, q=2.0, alpha=1e-6, beta=1e-3, eta=1e-3, lam=1.0)
        assert prm.violation() is None
        assert spoq_penalty(np.zeros(4), prm) == pytest.approx(0.0, abs=1e-14)

    def test_continuity_under_shrinking_perturbation(self):
        rng = np.random.default_rng(2)
        s = rng.normal(size=15)
        direction = rng.normal(size=15)
        direction /= np.linalg.norm(direction)
        base = spoq_penalty(s, SOOT)
        diffs = [
            abs(spoq_penalty(s + scale * direction, SOOT) - base)
            for scale in (1e-1, 1e-3, 1e-5, 1e-7)
        ]
        assert all(a > b for a, b in zip(diffs, diffs[1:]))
        assert diffs[-1] < 1e-6

    def test_approximate_scale_invariance_diagnostic(self):
        # diagnostic only: the ratio penalty is nearly (not exactly)
        # invariant under s -> 2s away from the smoothing floors
        rng = np.random.default_rng(3)
        drift = []
        values = []
        for _ in range(100):
            s = rng.normal(size=20) * 5.0
            values.append(spoq_penalty(s, SOOT))
            drift.append(abs(spoq_penalty(2.0 * s, SOOT) - values[-1]))
        spread = np.ptp(values)
        print(
            f"scale-invariance diagnostic: mean |psi(2s)-psi(s)| = {np.mean(drift):.3e}"
            f" vs value spread {spread:.3e}"
        )


class TestPenaltyGradient:
    def test_zero_at_origin(self):
        grad = spoq_penalty_grad(np.zeros(12), SOOT)
        np.testing.assert_array_equal(grad, 0.0)

    @pytest.mark.parametrize("prm", [SOOT, SPOQ_075_10], ids=["soot", "spoq"])
    def test_matches_finite_differences(self, prm):
        rng = np.random.default_rng(4)
        for _ in range(100):
            s = rng.normal(size=20)
            grad = spoq_penalty_grad(s, prm)
            ref = grad_fd(lambda x: spoq_penalty(x, prm), s)
            assert np.linalg.norm(grad - ref) < 1e-5 * np.linalg.norm(ref)


class TestValidation:
    def test_q2_condition_holds(self):
        prm = SpoqParams(p=1.0, q=2.0, alpha=7e-7, beta=1e-9, eta=1e-3, lam=1.0)
        # eta^2 * alpha^(p-2) = 1e-6 / 7e-7 ~ 1.43 > beta
        assert prm.violation() is None
        assert prm.validate() is prm

    def test_q_above_two_always_ok(self):
        assert SpoqParams(p=0.75, q=10.0, beta=1e3, eta=1e-9).violation() is None

    def test_eta_zero_rejected(self):
        msg = SpoqParams(p=1.0, q=2.0, eta=0.0).violation()
        assert msg is not None and "eta" in msg

    def test_q2_condition_violated(self):
        prm = SpoqParams(p=1.0, q=2.0, alpha=1.0, beta=1.0, eta=1e-6, lam=1.0)
        msg = prm.violation()
        assert msg is not None and "eta^2" in msg
        with pytest.raises(ValueError):
            prm.validate()

    def test_each_positivity_clause_named(self):
        assert "p must" in SpoqParams(p=2.5).violation()
        assert "q must" in SpoqParams(q=1.0).violation()
        assert "alpha" in SpoqParams(alpha=-1.0).violation()
        assert "beta" in SpoqParams(beta=0.0).violation()
        assert "lam" in SpoqParams(lam=0.0).violation()
