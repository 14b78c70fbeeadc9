from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ugae.advantage import (
    UGAE,
    MonteCarlo,
    RecursiveGAE,
    Trajectory,
    bias_bound,
    bias_coefficient,
    gae_recursive,
    k_step_advantage,
    monte_carlo,
    ugae,
)
from ugae.schedule import (
    MuEta,
    beta_schedule,
    exponential_schedule,
    fixed_horizon_schedule,
    hyperbolic_schedule,
    truncate,
)


def brute_ugae(traj, s, lam, trunc=None):
    """Explicit lambda-mixture of k-step advantages, residual mass on the last one."""
    T = len(traj)
    out = []
    for t in range(T):
        n = T - t if trunc is None else min(T - t, trunc)
        acc = 0.0
        for k in range(1, n):
            acc += (1 - lam) * lam ** (k - 1) * k_step_advantage(traj, s, t, k)
        acc += lam ** (n - 1) * k_step_advantage(traj, s, t, n)
        out.append(acc)
    return np.array(out)


def random_traj(rng, T):
    return Trajectory(rng.standard_normal(T), rng.standard_normal(T), float(rng.standard_normal()))


class TestTrajectory:
    def test_validation(self):
        with pytest.raises(ValueError):
            Trajectory([], [])
        with pytest.raises(ValueError):
            Trajectory([1.0, 2.0], [1.0])
        with pytest.raises(ValueError):
            Trajectory([np.nan], [0.0])
        with pytest.raises(ValueError):
            Trajectory([1.0], [0.0], float("inf"))

    def test_read_only(self):
        traj = Trajectory([1.0], [0.0])
        with pytest.raises(ValueError):
            traj.rewards[0] = 2.0


class TestKStep:
    def test_single_reward(self):
        traj = Trajectory([1.0], [0.0])
        for s in (exponential_schedule(0.3, 2), fixed_horizon_schedule(1, 2)):
            assert k_step_advantage(traj, s, 0, 1) == 1.0

    def test_hand_example(self):
        traj = Trajectory([1.0, 1.0], [2.0, 1.0])
        assert k_step_advantage(traj, exponential_schedule(0.5, 3), 0, 2) == -0.5

    def test_exponential_reduction(self):
        rng = np.random.default_rng(1)
        traj = random_traj(rng, 8)
        g = 0.9
        for t, k in [(0, 3), (2, 6), (7, 1)]:
            expected = -traj.values[t] + sum(g**l * traj.rewards[t + l] for l in range(k))
            expected += g**k * traj.value_at(t + k)
            assert k_step_advantage(traj, exponential_schedule(g, 20), t, k) == pytest.approx(expected, abs=1e-13)

    @pytest.mark.parametrize("t, k", [(-1, 1), (3, 1), (0, 0), (1, 3)])
    def test_range_errors(self, t, k):
        traj = Trajectory([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            k_step_advantage(traj, exponential_schedule(0.9, 10), t, k)

    def test_short_schedule(self):
        traj = Trajectory([1.0, 2.0, 3.0], [0.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            k_step_advantage(traj, exponential_schedule(0.9, 3), 0, 3)


class TestUgae:
    def test_lambda_zero_is_td(self):
        rng = np.random.default_rng(2)
        traj = random_traj(rng, 50)
        s = beta_schedule(MuEta(0.95, 0.5), 51)
        adv = ugae(traj, s, 0.0)
        v_next = np.append(traj.values[1:], traj.bootstrap_value)
        np.testing.assert_allclose(adv.advantages, traj.rewards + s.weights[1] * v_next - traj.values,
                                   rtol=0, atol=1e-12)
        assert adv.estimator == UGAE(0.0, None)

    def test_lambda_one_is_monte_carlo(self):
        rng = np.random.default_rng(3)
        traj = random_traj(rng, 60)
        s = hyperbolic_schedule(0.9, 61)
        np.testing.assert_allclose(ugae(traj, s, 1.0).advantages, monte_carlo(traj, s).advantages,
                                   rtol=0, atol=1e-12)

    def test_beta_length_three_brute_force(self):
        traj = Trajectory([1.0, -2.0, 0.5], [0.3, 1.1, -0.4], 0.7)
        s = beta_schedule(MuEta(0.95, 0.5), 4)
        np.testing.assert_allclose(ugae(traj, s, 0.5).advantages, brute_ugae(traj, s, 0.5),
                                   rtol=0, atol=1e-12)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 12), st.floats(0, 1), st.none() | st.integers(1, 15),
           st.integers(0, 2**32 - 1),
           st.sampled_from(["exp", "beta", "hyper", "fixed"]))
    def test_brute_force_property(self, T, lam, trunc, seed, kind):
        rng = np.random.default_rng(seed)
        traj = random_traj(rng, T)
        s = {
            "exp": exponential_schedule(0.9, T + 1),
            "beta": beta_schedule(MuEta(0.95, 0.5), T + 1),
            "hyper": hyperbolic_schedule(0.8, T + 1),
            "fixed": fixed_horizon_schedule(3, T + 1),
        }[kind]
        np.testing.assert_allclose(ugae(traj, s, lam, trunc).advantages, brute_ugae(traj, s, lam, trunc),
                                   rtol=0, atol=1e-11)

    def test_matches_recursive_gae(self):
        rng = np.random.default_rng(4)
        traj = random_traj(rng, 1000)
        a = ugae(traj, exponential_schedule(0.99, 1001), 0.95).advantages
        b = gae_recursive(traj, 0.99, 0.95).advantages
        assert np.max(np.abs(a - b)) <= 1e-8

    def test_trunc_equal_length_is_untruncated(self):
        rng = np.random.default_rng(5)
        traj = random_traj(rng, 40)
        s = beta_schedule(MuEta(0.9, 0.5), 41)
        np.testing.assert_array_equal(ugae(traj, s, 0.7, 40).advantages, ugae(traj, s, 0.7).advantages)

    def test_truncated_lambda_one_uses_truncated_return(self):
        # at lambda=1 a cut at L keeps L rewards and bootstraps from V(s_{t+L})
        rng = np.random.default_rng(6)
        T, L = 30, 7
        traj = random_traj(rng, T)
        s = exponential_schedule(0.95, T + 1)
        adv = ugae(traj, s, 1.0, L).advantages
        for t in range(T):
            n = min(L, T - t)
            assert adv[t] == pytest.approx(k_step_advantage(traj, s, t, n), abs=1e-12)

    def test_trunc_reward_sum_matches_truncated_schedule(self):
        # with zero values only the reward sum remains, which sees weights up to L-1
        rng = np.random.default_rng(7)
        T, L = 25, 6
        traj = Trajectory(rng.standard_normal(T), np.zeros(T))
        s = beta_schedule(MuEta(0.9, 0.5), T + 1)
        a = ugae(traj, s, 0.6, L).advantages
        b = ugae(traj, truncate(s, L), 0.6).advantages
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    def test_baseline_shift(self):
        rng = np.random.default_rng(8)
        T, lam, c = 20, 0.8, 1.7
        traj = random_traj(rng, T)
        shifted = Trajectory(traj.rewards, traj.values + c, traj.bootstrap_value + c)
        s = hyperbolic_schedule(0.9, T + 1)
        w = s.weights
        diff = ugae(shifted, s, lam).advantages - ugae(traj, s, lam).advantages
        for t in range(T):
            n = T - t
            expected = c * (-1 + (1 - lam) * sum(lam**l * w[l + 1] for l in range(n - 1))
                            + lam ** (n - 1) * w[n])
            assert diff[t] == pytest.approx(expected, abs=1e-10)

    def test_errors(self):
        traj = Trajectory([1.0, 2.0], [0.0, 0.0])
        s = exponential_schedule(0.9, 3)
        for lam in (-0.1, 1.1):
            with pytest.raises(ValueError, match="lambda"):
                ugae(traj, s, lam)
        with pytest.raises(ValueError, match="at least 3"):
            ugae(traj, exponential_schedule(0.9, 2), 0.5)
        with pytest.raises(ValueError):
            ugae(traj, s, 0.5, 0)
        # truncation shortens the required lookahead
        assert len(ugae(traj, exponential_schedule(0.9, 2), 0.5, 1)) == 2

    @given(arrays(np.float64, st.integers(1, 30), elements=st.floats(-1e3, 1e3)))
    def test_finite_output(self, r):
        traj = Trajectory(r, r[::-1])
        adv = ugae(traj, beta_schedule(MuEta(0.95, 0.5), r.size + 1), 0.9).advantages
        assert adv.shape == r.shape and np.all(np.isfinite(adv))


class TestGaeRecursive:
    def test_single(self):
        adv = gae_recursive(Trajectory([1.0], [0.0]), 0.9, 0.9)
        assert adv.advantages.tolist() == [1.0]
        assert adv.estimator == RecursiveGAE(0.9, 0.9)

    def test_undiscounted_return_to_go(self):
        r = np.array([1.0, -2.0, 3.0, 0.5])
        adv = gae_recursive(Trajectory(r, np.zeros(4)), 1.0, 1.0).advantages
        np.testing.assert_allclose(adv, np.cumsum(r[::-1])[::-1])

    def test_domain(self):
        traj = Trajectory([1.0], [0.0])
        with pytest.raises(ValueError):
            gae_recursive(traj, 1.5, 0.5)
        with pytest.raises(ValueError):
            gae_recursive(traj, 0.5, -0.5)


def test_monte_carlo_tag_and_bootstrap():
    traj = Trajectory([1.0, 1.0], [0.0, 0.0], 4.0)
    adv = monte_carlo(traj, exponential_schedule(0.5, 3))
    assert adv.estimator == MonteCarlo()
    np.testing.assert_allclose(adv.advantages, [1 + 0.5 + 0.25 * 4, 1 + 0.5 * 4])


class TestBiasCoefficient:
    @pytest.mark.parametrize("l", [1, 5, 50])
    def test_exponential_zero(self, l):
        s = exponential_schedule(0.99, 5100)
        assert abs(bias_coefficient(s, l, 5000)) <= 1e-9

    def test_beta_sign(self):
        # Beta moments are positively correlated in the exponent, so the sum is negative
        s = beta_schedule(MuEta(0.95, 0.5), 6000)
        value = bias_coefficient(s, 1, 5000)
        assert np.isfinite(value) and value < 0

    def test_fixed_horizon_brute_force(self):
        s = fixed_horizon_schedule(10, 40)
        for l in (1, 4, 10, 15):
            expected = sum((1.0 if l < 10 else 0.0) * (1.0 if tp < 10 else 0.0)
                           - (1.0 if l + tp < 10 else 0.0) for tp in range(20))
            assert bias_coefficient(s, l, 20) == expected
        # past the cut only the first product term survives and it is zero
        assert bias_coefficient(s, 12, 20) == 0.0

    def test_errors(self):
        s = exponential_schedule(0.9, 10)
        with pytest.raises(ValueError):
            bias_coefficient(s, 0, 5)
        with pytest.raises(ValueError):
            bias_coefficient(s, 6, 5)


class TestBiasBound:
    def test_exponential_zero(self):
        s = exponential_schedule(0.95, 3000)
        assert bias_bound(s, 0.9, 5.0, 1000) == pytest.approx(0.0, abs=1e-9)

    def test_zero_reward_bound(self):
        assert bias_bound(beta_schedule(MuEta(0.95, 0.5), 3000), 0.9, 0.0, 1000) == 0.0

    def test_beta_positive_and_linear(self):
        s = beta_schedule(MuEta(0.95, 0.5), 6000)
        one = bias_bound(s, 0.9, 1.0, 5000)
        assert np.isfinite(one) and one > 0
        assert bias_bound(s, 0.9, 2.0, 5000) == pytest.approx(2 * one, rel=1e-12)

    def test_monotone_in_lambda(self):
        s = beta_schedule(MuEta(0.9, 0.5), 3000)
        bounds = [bias_bound(s, lam, 1.0, 1000) for lam in (0.0, 0.3, 0.6, 0.9)]
        assert bounds == sorted(bounds)

    def test_errors(self):
        s = beta_schedule(MuEta(0.95, 0.5), 200)
        with pytest.raises(ValueError, match="lambda"):
            bias_bound(s, 1.0, 1.0, 50)
        with pytest.raises(ValueError):
            bias_bound(s, 0.5, -1.0, 50)
        with pytest.raises(ValueError, match="too short"):
            bias_bound(s, 0.99, 1.0, 190)


def test_small_grid_exhaustive():
    s = fixed_horizon_schedule(3, 4)
    for r, v in itertools.product(itertools.product([-1, 2], repeat=3), repeat=2):
        traj = Trajectory(r, v)
        np.testing.assert_allclose(ugae(traj, s, 0.5).advantages, brute_ugae(traj, s, 0.5),
                                   rtol=0, atol=1e-12)
