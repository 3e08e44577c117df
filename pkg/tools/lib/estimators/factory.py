"""
Estimator selection by name.
"""

from typing import Dict, Optional, Protocol, Tuple

import numpy as np

from tools.lib.envs.particle import NUM_ACTIONS
from tools.lib.estimators.beliefs import SIGMA_FLOOR
from tools.lib.estimators.distributional import DistributionalEstimator
from tools.lib.estimators.global_joint import GlobalEstimator
from tools.lib.estimators.point import PointEstimator
from tools.lib.nn import ParamStore


ESTIMATORS = ("dre", "p2p", "gre", "none")


class RewardEstimator(Protocol):
    """What the trainer needs from an estimator."""

    name: str

    def update(self, obs: np.ndarray, actions: np.ndarray, rewards: np.ndarray, lr: float) -> float:
        ...

    def branch_rewards(
        self,
        obs: np.ndarray,
        actions: np.ndarray,
        mode: str = "mean",
        rng: Optional[np.random.Generator] = None,
    ) -> np.ndarray:
        ...

    def param_stores(self) -> Dict[str, ParamStore]:
        ...


def build_estimator(
    name: str,
    num_agents: int,
    obs_width: int,
    rng: np.random.Generator,
    alpha: float = 0.1,
    beta: float = 10.0,
    num_actions: int = NUM_ACTIONS,
    hidden_widths: Tuple[int, ...] = (64, 64),
    sigma_floor: float = SIGMA_FLOOR,
    p2p_input: str = "obs_action",
) -> Optional[RewardEstimator]:
    """
    Build the estimator named in the run configuration.

    Returns:
        The estimator, or None for "none" (raw rewards feed the trainer)
    """
    if name == "dre":
        return DistributionalEstimator.create(
            num_agents, obs_width, rng, alpha, beta, num_actions, hidden_widths, sigma_floor
        )
    if name == "p2p":
        return PointEstimator.create(num_agents, obs_width, rng, num_actions, p2p_input, hidden_widths)
    if name == "gre":
        return GlobalEstimator.create(
            num_agents, obs_width, rng, alpha, beta, num_actions, hidden_widths, sigma_floor
        )
    if name == "none":
        return None
    raise ValueError(f"Unknown estimator '{name}' (expected one of {', '.join(ESTIMATORS)})")


__all__ = ["ESTIMATORS", "RewardEstimator", "build_estimator"]
