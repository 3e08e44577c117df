"""
Reward-uncertainty settings wrapped around deterministic scenario rewards.

    dete     r                         (identity)
    dist     r + 0.05 * r + 0.05 * z   (natural disturbance, z ~ N(0, 1))
    ac_dist  r + k + delta * z         (action-dependent, k the action index)

``delta`` is a standard deviation.
"""

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from tools.lib.envs.particle import NUM_ACTIONS
from tools.lib.exceptions import ActionIndexError, RewardSettingError, ShapeMismatchError


SETTINGS = ("dete", "dist", "ac_dist")


def normalize_tag(tag: str) -> str:
    """Accept the CLI spelling ``ac-dist`` as well as ``ac_dist``."""
    normalized = tag.replace("-", "_")
    if normalized not in SETTINGS:
        raise RewardSettingError(
            f"Unknown reward setting '{tag}' (expected one of dete, dist, ac-dist)"
        )
    return normalized


@dataclass
class RewardSetting:
    """An uncertainty setting together with its own noise stream."""

    tag: str
    rng: np.random.Generator = field(default_factory=lambda: np.random.default_rng(0))
    delta: float = 0.001
    scale: float = 0.05
    num_actions: int = NUM_ACTIONS

    def __post_init__(self) -> None:
        self.tag = normalize_tag(self.tag)
        if self.delta <= 0:
            raise RewardSettingError(f"delta must be > 0, got {self.delta}")
        if self.scale < 0:
            raise RewardSettingError(f"scale must be >= 0, got {self.scale}")

    @classmethod
    def from_seed(cls, tag: str, seed: Union[int, np.random.SeedSequence], **kwargs) -> "RewardSetting":
        return cls(tag=tag, rng=np.random.default_rng(seed), **kwargs)

    def _check_action(self, k: int) -> None:
        if not 0 <= int(k) < self.num_actions:
            raise ActionIndexError(int(k), self.num_actions)


def perturb(setting: RewardSetting, r_dete: float, k: int) -> float:
    """Observed reward for one agent taking action k."""
    setting._check_action(k)
    if setting.tag == "dete":
        return float(r_dete)
    z = setting.rng.standard_normal()
    if setting.tag == "dist":
        return float(r_dete + setting.scale * r_dete + setting.scale * z)
    return float(r_dete + k + setting.delta * z)


def perturb_batch(
    setting: RewardSetting, rewards: Sequence[float], actions: Sequence[int]
) -> np.ndarray:
    """Vectorized perturb() over one reward and one action per agent."""
    r = np.asarray(rewards, dtype=np.float64)
    a = np.asarray(actions)
    if r.shape != a.shape:
        raise ShapeMismatchError("rewards and actions", r.shape, a.shape)
    for k in a.reshape(-1):
        setting._check_action(int(k))
    if setting.tag == "dete":
        return r.copy()
    z = setting.rng.standard_normal(r.shape)
    if setting.tag == "dist":
        return r + setting.scale * r + setting.scale * z
    return r + a.astype(np.float64) + setting.delta * z


__all__ = ["SETTINGS", "RewardSetting", "normalize_tag", "perturb", "perturb_batch"]
