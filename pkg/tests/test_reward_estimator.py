#!/usr/bin/env python3
"""
Unit Tests for the reward estimators

Covers the closed-form losses, the sampling modes, the one-to-many
separation between distributional and point estimators, and the factory.
"""

import math
import unittest

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tools.lib.estimators import (
    DistributionalEstimator,
    EstimatorNet,
    GlobalEstimator,
    GlobalNet,
    PointEstimator,
    PointNet,
    RewardBeliefs,
    build_estimator,
    estimate,
    estimator_update,
    gre_estimate,
    gre_update,
    nll_loss,
    p2p_estimate,
    p2p_update,
    regularizer,
    sample_or_mean,
)
from tools.lib.estimators.global_joint import gre_branches
from tools.lib.estimators.point import p2p_branches
from tools.lib.exceptions import ActionIndexError, ShapeMismatchError


HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
K = 5


def beliefs(mu, sigma):
    return RewardBeliefs(np.asarray(mu, dtype=np.float64), np.asarray(sigma, dtype=np.float64))


def branch_batch(rng, observations, size):
    """(obs, k, r) triples where branch k pays N(k, 0.1) regardless of the observation."""
    rows = rng.integers(0, len(observations), size=size)
    actions = rng.integers(0, K, size=size)
    rewards = actions + 0.1 * rng.standard_normal(size)
    return observations[rows], actions, rewards


class TestNllLoss(unittest.TestCase):
    """Test the branch Gaussian negative log likelihood"""

    def test_zero_residual_unit_sigma(self):
        """Test mu=r, sigma=1 gives 0.5*ln(2*pi)"""
        b = beliefs([0.3, 1.0, 2.0], [1.0, 1.0, 1.0])
        self.assertAlmostEqual(nll_loss(b, 1, 1.0), HALF_LOG_2PI, delta=1e-12)
        self.assertAlmostEqual(HALF_LOG_2PI, 0.918939, places=6)

    def test_sigma_for_unit_loss(self):
        """Test sigma = e / sqrt(2*pi) gives loss 1"""
        sigma = math.e / math.sqrt(2 * math.pi)
        b = beliefs([4.0], [sigma])
        self.assertAlmostEqual(nll_loss(b, 0, 4.0), 1.0, delta=1e-12)

    def test_residual_term(self):
        """Test mu=0, sigma=1, r=2 gives 0.918939 + 2"""
        b = beliefs([0.0, 0.0], [1.0, 1.0])
        self.assertAlmostEqual(nll_loss(b, 0, 2.0), HALF_LOG_2PI + 2.0, delta=1e-12)

    def test_minimized_at_target(self):
        """Test shifting mu away from r by 0.1 raises the loss"""
        at = nll_loss(beliefs([1.0], [0.5]), 0, 1.0)
        for shifted in (0.9, 1.1):
            self.assertLess(at, nll_loss(beliefs([shifted], [0.5]), 0, 1.0))

    def test_bad_branch(self):
        """Test an out-of-range branch raises ActionIndexError"""
        with self.assertRaises(ActionIndexError):
            nll_loss(beliefs([0.0] * K, [1.0] * K), K, 0.0)

    def test_non_positive_sigma_rejected(self):
        """Test beliefs with sigma <= 0 cannot be built"""
        with self.assertRaises(ValueError):
            beliefs([0.0, 0.0], [1.0, 0.0])


class TestRegularizer(unittest.TestCase):
    """Test alpha*||sigma||_1 + beta*var(mu)"""

    def test_unit_sigma_equal_means(self):
        """Test sigma=1 on five branches with equal means gives 0.5"""
        b = beliefs([2.0] * K, [1.0] * K)
        self.assertAlmostEqual(regularizer(b, 0.1, 10.0), 0.5, delta=1e-12)

    def test_floored_sigma_constant_means(self):
        """Test the sigma floor alone contributes alpha*K*1e-4"""
        b = RewardBeliefs.floored(np.zeros(K), np.zeros(K))
        self.assertAlmostEqual(regularizer(b, 0.1, 10.0), 0.1 * K * 1e-4, delta=1e-15)

    def test_population_variance(self):
        """Test mu=[0,1] with floored sigma gives 2.5 + alpha*2e-4"""
        b = RewardBeliefs.floored(np.array([0.0, 1.0]), np.zeros(2))
        self.assertAlmostEqual(regularizer(b, 0.1, 10.0), 2.5 + 0.1 * 2e-4, delta=1e-12)

    def test_negative_coefficients(self):
        """Test negative alpha or beta raise ValueError"""
        b = beliefs([0.0], [1.0])
        with self.assertRaises(ValueError):
            regularizer(b, -0.1, 10.0)
        with self.assertRaises(ValueError):
            regularizer(b, 0.1, -1.0)


@given(
    mu=st.lists(st.floats(-50, 50, allow_nan=False), min_size=K, max_size=K),
    sigma=st.lists(st.floats(1e-3, 10, allow_nan=False), min_size=K, max_size=K),
    data=st.data(),
)
def test_regularizer_permutation_invariant(mu, sigma, data):
    """Test permuting the branches leaves the regularizer unchanged"""
    order = data.draw(st.permutations(range(K)))
    a = regularizer(beliefs(mu, sigma), 0.1, 10.0)
    b = regularizer(beliefs(np.asarray(mu)[order], np.asarray(sigma)[order]), 0.1, 10.0)
    assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


class TestSampleOrMean:
    """Test reducing beliefs to one reward per branch"""

    def test_mean_mode(self):
        """Test mean mode returns mu exactly"""
        b = beliefs([0.5, -1.0, 3.0], [0.1, 0.2, 0.3])
        np.testing.assert_array_equal(sample_or_mean(b, "mean"), b.mu)

    def test_sample_mode_statistics(self):
        """Test 10^6 draws per branch average to mu within 5 standard errors"""
        draws = 10**6
        mu = np.array([-1.0, 0.0, 2.0, 5.0, 0.3])
        sigma = np.array([1e-4, 0.5, 1.0, 2.0, 0.1])
        b = beliefs(np.tile(mu, (draws, 1)), np.tile(sigma, (draws, 1)))
        samples = sample_or_mean(b, "sample", np.random.default_rng(0))
        tolerance = 5 * sigma / math.sqrt(draws)
        assert np.all(np.abs(samples.mean(axis=0) - mu) < tolerance)

    def test_sample_mode_reproducible(self):
        """Test seeded sample mode repeats"""
        b = beliefs([0.0, 1.0], [1.0, 1.0])
        a = sample_or_mean(b, "sample", np.random.default_rng(3))
        c = sample_or_mean(b, "sample", np.random.default_rng(3))
        np.testing.assert_array_equal(a, c)

    def test_sample_mode_needs_rng(self):
        """Test sample mode without an rng raises ValueError"""
        with pytest.raises(ValueError):
            sample_or_mean(beliefs([0.0], [1.0]), "sample")

    def test_unknown_mode(self):
        """Test an unknown mode raises ValueError"""
        with pytest.raises(ValueError):
            sample_or_mean(beliefs([0.0], [1.0]), "median")


class TestDistributionalEstimator:
    """Test the per-agent multi-branch estimator"""

    def test_estimate_shape_and_floor(self, rng):
        """Test estimate() returns K branches with sigma >= 1e-4"""
        net = EstimatorNet.create(6, rng, hidden_widths=(16, 16))
        b = estimate(net, rng.normal(size=(20, 6)) * 100)
        assert b.mu.shape == (20, K)
        assert np.all(b.sigma >= 1e-4)

    def test_zero_learning_rate(self, rng):
        """Test lr=0 leaves parameters unchanged and still reports the loss"""
        net = EstimatorNet.create(4, rng, hidden_widths=(8, 8))
        before = net.params.state_dict()
        obs, actions, rewards = branch_batch(rng, rng.normal(size=(4, 4)), 32)
        loss = estimator_update(net, obs, actions, rewards, lr=0.0)
        assert np.isfinite(loss)
        for name, values in net.params.state_dict().items():
            np.testing.assert_array_equal(values, before[name])

    def test_empty_batch(self, rng):
        """Test an empty batch is rejected"""
        net = EstimatorNet.create(4, rng, hidden_widths=(8, 8))
        with pytest.raises(ValueError):
            estimator_update(net, np.zeros((0, 4)), np.zeros(0, dtype=int), np.zeros(0))

    def test_batch_length_mismatch(self, rng):
        """Test batch columns of different lengths"""
        net = EstimatorNet.create(4, rng, hidden_widths=(8, 8))
        with pytest.raises(ShapeMismatchError):
            estimator_update(net, np.zeros((3, 4)), np.zeros(2, dtype=int), np.zeros(3))

    def test_wrapper_shapes(self, rng):
        """Test the multi-agent wrapper updates and reports (B, N, K) branches"""
        est = DistributionalEstimator.create(3, 4, rng, hidden_widths=(8, 8))
        obs = rng.normal(size=(10, 3, 4))
        actions = rng.integers(0, K, size=(10, 3))
        loss = est.update(obs, actions, rng.normal(size=(10, 3)), lr=1e-3)
        assert np.isfinite(loss)
        assert est.branch_rewards(obs, actions).shape == (10, 3, K)
        assert sorted(est.param_stores()) == ["estimator.0", "estimator.1", "estimator.2"]


def test_one_to_many_separation():
    """
    Test DRE recovers every branch mean while p2p collapses them.

    beta is 0 here: the default mean-variance penalty pulls branch means
    toward each other and would mask the separation.
    """
    rng = np.random.default_rng(0)
    observations = rng.normal(size=(16, 4))
    dre = EstimatorNet.create(4, np.random.default_rng(1))
    p2p = PointNet.create(4, np.random.default_rng(2), input_mode="obs")

    for step in range(5000):
        lr = 3e-3 if step < 4000 else 3e-4
        obs, actions, rewards = branch_batch(rng, observations, 128)
        estimator_update(dre, obs, actions, rewards, alpha=0.1, beta=0.0, lr=lr)
        p2p_update(p2p, obs, actions, rewards, lr=lr)

    targets = np.arange(K, dtype=np.float64)
    dre_means = estimate(dre, observations).mu
    assert np.max(np.abs(dre_means - targets)) < 0.1

    p2p_means = p2p_branches(p2p, observations)
    # One value per observation, so every branch sees the same prediction
    np.testing.assert_allclose(p2p_means, p2p_means[:, :1].repeat(K, axis=1))
    assert np.max(np.abs(p2p_means - targets), axis=1).min() >= 0.5


class TestPointEstimator:
    """Test the p2p regressor"""

    def test_constant_target(self, rng):
        """Test regression onto a constant target"""
        net = PointNet.create(4, rng, hidden_widths=(16, 16))
        obs = rng.normal(size=(64, 4))
        actions = rng.integers(0, K, size=64)
        target = np.full(64, 1.5)
        for _ in range(1500):
            p2p_update(net, obs, actions, target, lr=3e-3)
        np.testing.assert_allclose(p2p_estimate(net, obs, actions), 1.5, atol=0.05)

    def test_zero_learning_rate(self, rng):
        """Test lr=0 leaves parameters unchanged"""
        net = PointNet.create(4, rng, hidden_widths=(8, 8))
        before = net.params.state_dict()
        p2p_update(net, rng.normal(size=(8, 4)), np.zeros(8, dtype=int), np.ones(8), lr=0.0)
        for name, values in net.params.state_dict().items():
            np.testing.assert_array_equal(values, before[name])

    def test_branch_queries(self, rng):
        """Test p2p_branches asks the regressor once per action"""
        net = PointNet.create(4, rng, hidden_widths=(8, 8))
        obs = rng.normal(size=(3, 4))
        branches = p2p_branches(net, obs)
        assert branches.shape == (3, K)
        np.testing.assert_allclose(branches[:, 2], p2p_estimate(net, obs, np.full(3, 2)))

    def test_unknown_input_mode(self, rng):
        """Test an unknown input mode is rejected"""
        with pytest.raises(ValueError):
            PointNet.create(4, rng, input_mode="action")

    def test_wrapper_branches(self, rng):
        """Test the multi-agent p2p wrapper"""
        est = PointEstimator.create(2, 4, rng, hidden_widths=(8, 8))
        obs = rng.normal(size=(5, 2, 4))
        assert est.branch_rewards(obs, np.zeros((5, 2), dtype=int)).shape == (5, 2, K)


class TestGlobalEstimator:
    """Test the joint-input GRE estimator"""

    def test_constant_team_reward(self, rng):
        """Test convergence onto a constant team reward"""
        net = GlobalNet.create(2, 3, rng, hidden_widths=(16, 16))
        obs = rng.normal(size=(32, 2, 3))
        actions = rng.integers(0, K, size=(32, 2))
        for step in range(1500):
            team = -2.0 + 0.1 * rng.standard_normal(32)
            lr = 3e-3 if step < 1200 else 3e-4
            gre_update(net, obs, actions, team, alpha=0.1, beta=0.0, lr=lr)
        np.testing.assert_allclose(gre_estimate(net, obs, actions).mu[..., 0], -2.0, atol=0.1)

    def test_zero_learning_rate(self, rng):
        """Test lr=0 leaves parameters unchanged"""
        net = GlobalNet.create(2, 3, rng, hidden_widths=(8, 8))
        before = net.params.state_dict()
        gre_update(
            net, rng.normal(size=(4, 2, 3)), np.zeros((4, 2), dtype=int), np.zeros(4), lr=0.0
        )
        for name, values in net.params.state_dict().items():
            np.testing.assert_array_equal(values, before[name])

    def test_counterfactual_branches(self, rng):
        """Test branch k of agent i equals the estimate with a_i replaced by k"""
        net = GlobalNet.create(3, 2, rng, hidden_widths=(8, 8))
        obs = rng.normal(size=(4, 3, 2))
        actions = rng.integers(0, K, size=(4, 3))
        branches = gre_branches(net, obs, actions)
        assert branches.mu.shape == (4, 3, K)
        swapped = actions.copy()
        swapped[:, 1] = 4
        np.testing.assert_allclose(
            branches.mu[:, 1, 4], gre_estimate(net, obs, swapped).mu[..., 0], rtol=1e-10, atol=1e-12
        )
        # Branch at the executed action reproduces the factual estimate
        factual = gre_estimate(net, obs, actions).mu[..., 0]
        np.testing.assert_allclose(
            branches.mu[np.arange(4), 0, actions[:, 0]], factual, rtol=1e-10, atol=1e-12
        )

    def test_wrong_joint_shape(self, rng):
        """Test a joint observation with the wrong agent count"""
        net = GlobalNet.create(3, 2, rng, hidden_widths=(8, 8))
        with pytest.raises(ShapeMismatchError):
            gre_estimate(net, np.zeros((1, 2, 2)), np.zeros((1, 2), dtype=int))

    def test_wrapper_trains_on_mean_reward(self, rng, mocker):
        """Test the wrapper trains on the agents' mean received reward"""
        est = GlobalEstimator.create(2, 3, rng, hidden_widths=(8, 8))
        spy = mocker.patch("tools.lib.estimators.global_joint.gre_update", return_value=0.0)
        rewards = np.array([[1.0, 3.0], [0.0, -2.0]])
        est.update(np.zeros((2, 2, 3)), np.zeros((2, 2), dtype=int), rewards, lr=1e-3)
        np.testing.assert_array_equal(spy.call_args.args[3], [2.0, -1.0])
        assert list(est.param_stores()) == ["estimator.global"]


class TestFactory(unittest.TestCase):
    """Test estimator selection by name"""

    def test_known_names(self):
        """Test every estimator name builds the matching type"""
        rng = np.random.default_rng(0)
        kwargs = dict(num_agents=2, obs_width=4, rng=rng, hidden_widths=(8, 8))
        self.assertIsInstance(build_estimator("dre", **kwargs), DistributionalEstimator)
        self.assertIsInstance(build_estimator("p2p", **kwargs), PointEstimator)
        self.assertIsInstance(build_estimator("gre", **kwargs), GlobalEstimator)
        self.assertIsNone(build_estimator("none", **kwargs))

    def test_p2p_input_mode_forwarded(self):
        """Test the p2p input mode reaches the regressors"""
        est = build_estimator(
            "p2p", 2, 4, np.random.default_rng(0), hidden_widths=(8, 8), p2p_input="obs"
        )
        self.assertEqual(est.nets[0].input_mode, "obs")

    def test_unknown_name(self):
        """Test an unknown estimator raises ValueError"""
        with self.assertRaises(ValueError):
            build_estimator("bayes", 2, 4, np.random.default_rng(0))
