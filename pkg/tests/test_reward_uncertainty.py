#!/usr/bin/env python3
"""
Unit Tests for reward-uncertainty settings
"""

import unittest

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tools.lib.envs.uncertainty import RewardSetting, normalize_tag, perturb, perturb_batch
from tools.lib.exceptions import ActionIndexError, RewardSettingError, ShapeMismatchError


DRAWS = 10**6


class TestTags(unittest.TestCase):
    """Test setting tags and parameter validation"""

    def test_cli_spelling(self):
        """Test ac-dist normalizes to ac_dist"""
        self.assertEqual(normalize_tag("ac-dist"), "ac_dist")
        self.assertEqual(RewardSetting("ac-dist").tag, "ac_dist")

    def test_unknown_tag(self):
        """Test an unknown tag raises RewardSettingError"""
        with self.assertRaises(RewardSettingError):
            RewardSetting("gaussian")

    def test_bad_parameters(self):
        """Test non-positive delta and negative scale are rejected"""
        with self.assertRaises(RewardSettingError):
            RewardSetting("ac_dist", delta=0.0)
        with self.assertRaises(RewardSettingError):
            RewardSetting("dist", scale=-0.1)

    def test_action_out_of_range(self):
        """Test actions outside [0, 5) raise ActionIndexError"""
        setting = RewardSetting("ac_dist")
        with self.assertRaises(ActionIndexError):
            perturb(setting, 0.0, 5)
        with self.assertRaises(ActionIndexError):
            perturb_batch(setting, [0.0, 0.0], [0, -1])

    def test_batch_shape_mismatch(self):
        """Test rewards and actions must have the same shape"""
        with self.assertRaises(ShapeMismatchError):
            perturb_batch(RewardSetting("dist"), [0.0, 1.0], [0])


class TestDistributions:
    """Monte Carlo checks of each setting's mean and spread"""

    @given(r=st.floats(-1e6, 1e6, allow_nan=False), k=st.integers(0, 4))
    def test_dete_is_identity(self, r, k):
        """Test dete returns the deterministic reward exactly"""
        assert perturb(RewardSetting("dete"), r, k) == r

    def test_dist_zero_reward(self):
        """Test dist at r=0 has mean 0 and standard deviation 0.05"""
        setting = RewardSetting.from_seed("dist", 0)
        samples = perturb_batch(setting, np.zeros(DRAWS), np.zeros(DRAWS, dtype=np.int64))
        assert abs(samples.mean()) < 5 * 0.05 / np.sqrt(DRAWS)
        assert samples.std() == pytest.approx(0.05, rel=0.01)

    def test_dist_scales_reward(self):
        """Test dist at r=-2 has mean -2.1"""
        setting = RewardSetting.from_seed("dist", 1)
        samples = perturb_batch(setting, np.full(DRAWS, -2.0), np.zeros(DRAWS, dtype=np.int64))
        assert samples.mean() == pytest.approx(-2.1, abs=1e-3)

    def test_ac_dist_shifts_by_action(self):
        """Test ac_dist at r=0, k=3 has mean 3 and standard deviation delta"""
        setting = RewardSetting.from_seed("ac_dist", 2)
        samples = perturb_batch(setting, np.zeros(DRAWS), np.full(DRAWS, 3))
        assert samples.mean() == pytest.approx(3.0, abs=1e-4)
        assert samples.std() == pytest.approx(0.001, rel=0.01)

    @pytest.mark.parametrize("r", [0.0, -1.7])
    def test_ac_dist_adjacent_actions_one_apart(self, r):
        """Test ac_dist means of adjacent actions differ by exactly one at any reward"""
        setting = RewardSetting.from_seed("ac_dist", 5)
        draws = 10**5
        means = [
            perturb_batch(setting, np.full(draws, r), np.full(draws, k)).mean() for k in range(5)
        ]
        np.testing.assert_allclose(np.diff(means), 1.0, atol=1e-4)
        assert means[0] == pytest.approx(r, abs=1e-4)

    def test_single_draws_match_batch_stream(self):
        """Test perturb() and perturb_batch() consume the same noise stream"""
        a = RewardSetting.from_seed("ac_dist", 9)
        b = RewardSetting.from_seed("ac_dist", 9)
        singles = [perturb(a, 0.5, k) for k in (0, 1, 2)]
        batch = perturb_batch(b, [0.5, 0.5, 0.5], [0, 1, 2])
        # Scalar draws and a vector draw of the same length coincide for PCG64
        np.testing.assert_allclose(singles, batch)

    def test_seeded_settings_repeat(self):
        """Test equal seeds give equal noise"""
        a = perturb_batch(RewardSetting.from_seed("dist", 4), [1.0, 2.0], [0, 1])
        b = perturb_batch(RewardSetting.from_seed("dist", 4), [1.0, 2.0], [0, 1])
        np.testing.assert_array_equal(a, b)
